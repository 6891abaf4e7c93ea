from __future__ import annotations

from ..actions import Bid, BuyRight, DecisionContext, Observation, TCDefense, TCInit, TCOffer, TurnChoice
from .base import Agent
from .beliefs import Beliefs
from .heuristics import (
    DEFAULT_CONSTANTS,
    CodeAgentConstants,
    floor10,
    pay_cards,
    pursues,
    zero_cards,
)


class EconomyAgent(Agent):
    """Budgeter: never commits more than a fixed share of its wealth in a turn,
    keeps money away from the score leader and bluffs habitual accepters."""

    name = "economy"

    def __init__(self, seat: int, constants: CodeAgentConstants = DEFAULT_CONSTANTS) -> None:
        super().__init__()
        self.c = constants
        self.beliefs = Beliefs(seat)

    def params(self):
        return {k: v for k, v in self.c.to_dict().items() if k.startswith("economy_")}

    def notify(self, event) -> None:
        self.beliefs.update(event)

    def cap(self, obs: Observation) -> int:
        return floor10(self.c.economy_cap_fraction * obs.wealth)

    def leader(self, obs: Observation) -> int | None:
        """Opponent with the highest score, ties broken by estimated wealth."""
        if not obs.opponents:
            return None
        return max(obs.opponents, key=lambda o: (obs.scores.get(o.player_id, 0),
                                                 self.beliefs.estimate(o.player_id),
                                                 -o.player_id)).player_id

    def counter_prob(self, pid: int) -> float:
        return 1.0 - self.beliefs.accept_rate(pid, self.c.economy_accept_prior)

    def _tc_plan(self, obs: Observation, targets):
        budget = self.cap(obs)
        best = None
        for t in targets:
            if t.mine < t.theirs:
                continue
            if self.counter_prob(t.opponent) <= self.c.economy_bluff_max_counter_prob:
                cards, cost = zero_cards(obs.money, 2), 0
            else:
                need = self.beliefs.estimate(t.opponent) + 10
                if need > budget:
                    continue
                cards = pay_cards(obs.money, need)
                cost = sum(cards)
            key = (t.animal.points - cost, -t.opponent)
            if best is None or key > best[0]:
                best = (key, TCInit(t.opponent, t.animal, cards))
        return None if best is None else best[1]

    def turn_choice(self, obs, ctx: DecisionContext):
        if self._tc_plan(obs, obs.valid_targets) is not None:
            return TurnChoice("kuhhandel")
        return TurnChoice("auction" if "auction" in ctx.options else "pass")

    def bid(self, obs, ctx: DecisionContext):
        if ctx.standing_bidder == obs.player_id or not pursues(obs, ctx.card):
            return Bid(None)
        limit = min(self.cap(obs), ctx.card.points)
        if ctx.auctioneer == self.leader(obs):
            limit = floor10(limit * self.c.economy_leader_cap_factor)
        return Bid(ctx.min_bid) if ctx.min_bid <= limit else Bid(None)

    def buy_right(self, obs, ctx: DecisionContext):
        if ctx.bidder == self.leader(obs):
            return BuyRight(False)
        return BuyRight(obs.count(ctx.card) >= 1 and ctx.price <= self.cap(obs))

    def tc_init(self, obs, ctx: DecisionContext):
        plan = self._tc_plan(obs, ctx.targets)
        if plan is not None:
            return plan
        t = ctx.targets[0]
        return TCInit(t.opponent, t.animal, zero_cards(obs.money, 1))

    def tc_defense(self, obs, ctx: DecisionContext):
        need = self.beliefs.estimate(ctx.initiator) + 10
        if need <= self.cap(obs) and any(c > 0 for c in obs.money):
            return TCDefense(False, pay_cards(obs.money, need))
        return TCDefense(True)

    def tc_tie_retry(self, obs, ctx: DecisionContext):
        return TCOffer(pay_cards(obs.money, min(self.cap(obs), (ctx.previous_total or 0) + 10)))
