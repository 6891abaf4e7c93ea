from __future__ import annotations

from ..actions import Bid, BuyRight, DecisionContext, Observation, TCDefense, TCInit, TCOffer, TurnChoice
from .base import Agent
from .heuristics import DEFAULT_CONSTANTS, CodeAgentConstants, floor10, no_path, pay_cards


class SetRaceAgent(Agent):
    """Greedy set completer: spends by how close a card brings it to a set."""

    name = "setrace"

    def __init__(self, seat: int, constants: CodeAgentConstants = DEFAULT_CONSTANTS) -> None:
        super().__init__()
        self.c = constants

    def params(self):
        return {k: v for k, v in self.c.to_dict().items() if k.startswith("setrace_")}

    def _share(self, obs: Observation, mine_after: int) -> float:
        k = obs.set_size
        if mine_after >= k:
            return self.c.setrace_cap_complete
        if mine_after == k - 1:
            return self.c.setrace_cap_three
        return self.c.setrace_cap_other

    def _cap(self, obs: Observation, animal, cards: int = 1) -> int:
        return floor10(obs.wealth * self._share(obs, obs.count(animal) + cards))

    def _best_tc(self, obs: Observation, targets, post_deck: bool):
        best = None
        for t in targets:
            size = 2 if t.mine >= 2 and t.theirs >= 2 else 1
            completes = t.mine + size >= obs.set_size
            if not completes and not (post_deck and t.mine >= t.theirs):
                continue
            key = (completes, t.mine + size, t.animal.points, -t.opponent)
            if best is None or key > best[0]:
                best = (key, t, size)
        return best

    def turn_choice(self, obs, ctx: DecisionContext):
        if self._best_tc(obs, obs.valid_targets, "auction" not in ctx.options):
            return TurnChoice("kuhhandel")
        return TurnChoice("auction" if "auction" in ctx.options else "pass")

    def bid(self, obs, ctx: DecisionContext):
        if ctx.standing_bidder == obs.player_id or no_path(obs, ctx.card):
            return Bid(None)
        if ctx.min_bid <= self._cap(obs, ctx.card):
            return Bid(ctx.min_bid)
        return Bid(None)

    def buy_right(self, obs, ctx: DecisionContext):
        advances = obs.count(ctx.card) >= 1
        return BuyRight(advances and ctx.price <= self._cap(obs, ctx.card))

    def tc_init(self, obs, ctx: DecisionContext):
        best = self._best_tc(obs, ctx.targets, obs.deck_remaining == 0)
        if best is None:
            t, size = ctx.targets[0], 1
        else:
            _, t, size = best
        return TCInit(t.opponent, t.animal, pay_cards(obs.money, self._cap(obs, t.animal, size)))

    def tc_defense(self, obs, ctx: DecisionContext):
        mine = obs.count(ctx.animal)
        theirs = obs.opponent(ctx.initiator).animals.get(ctx.animal, 0)
        if mine < theirs or not any(c > 0 for c in obs.money):
            return TCDefense(True)
        return TCDefense(False, pay_cards(obs.money, self._cap(obs, ctx.animal, ctx.trade_size)))

    def tc_tie_retry(self, obs, ctx: DecisionContext):
        return TCOffer(pay_cards(obs.money, (ctx.previous_total or 0) + 10))
