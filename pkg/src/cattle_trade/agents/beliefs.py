"""Opponent model built only from the public (redacted) event stream."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..animals import STARTING_MONEY, Animal
from ..events import Event


@dataclass
class Beliefs:
    me: int
    initial_wealth: int = sum(STARTING_MONEY)
    # share of the initiator's estimated wealth assumed paid in an accepted
    # trade challenge whose offer we cannot see
    unseen_offer_share: float = 0.5
    wealth: dict[int, int] = field(default_factory=dict)
    revealed: dict[int, int] = field(default_factory=dict)
    tc_received: Counter = field(default_factory=Counter)
    tc_accepted: Counter = field(default_factory=Counter)
    cards_seen: Counter = field(default_factory=Counter)
    auction_prices: list[tuple[str, int]] = field(default_factory=list)

    def estimate(self, pid: int) -> int:
        return max(0, self.wealth.get(pid, self.initial_wealth))

    def accept_rate(self, pid: int, prior: float = 0.5) -> float:
        n = self.tc_received[pid]
        return self.tc_accepted[pid] / n if n else prior

    def _add(self, pid: int, amount: int) -> None:
        if pid != self.me:
            self.wealth[pid] = self.estimate(pid) + amount

    def update(self, ev: Event) -> None:
        t, d = ev.type, ev.data
        if t == "GameStarted":
            n = d["config"]["num_players"]
            self.wealth = {p: self.initial_wealth for p in range(n) if p != self.me}
        elif t == "CardDrawn":
            self.cards_seen[Animal.parse(d["animal"])] += 1
        elif t == "DonkeyPayout":
            for p in list(self.wealth):
                self._add(p, d["denomination"])
        elif t in ("AuctionSold", "BuyRightExercised"):
            paid = d.get("total_paid", d["price"])
            self._add(d["payer"], -paid)
            self._add(d["payee"], paid)
            self.auction_prices.append((d["animal"], d["price"]))
        elif t == "WealthRevealed":
            self.revealed[d["player"]] = d["total"]
            if d["player"] != self.me:
                self.wealth[d["player"]] = d["total"]
        elif t == "TCAccepted":
            if "offer_total" in d:
                paid = d["offer_total"]
            else:
                paid = int(self.estimate(d["initiator"]) * self.unseen_offer_share) // 10 * 10
            self._add(d["initiator"], -paid)
            self._add(d["target"], paid)
        elif t == "TCRevealed":
            delta = d["target_total"] - d["initiator_total"]
            self._add(d["initiator"], delta)
            self._add(d["target"], -delta)
        elif t == "TCResolved":
            self.tc_received[d["target"]] += 1
            if d["accepted"]:
                self.tc_accepted[d["target"]] += 1
