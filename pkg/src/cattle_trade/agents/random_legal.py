from __future__ import annotations

import random

from ..actions import Bid, BuyRight, TCDefense, TCInit, TCOffer, TurnChoice
from .base import Agent


class RandomLegalAgent(Agent):
    """Samples uniformly among legal action kinds, then uniformly within the kind."""

    name = "random"

    def __init__(self, seed: int = 0) -> None:
        super().__init__()
        self.seed = seed
        self.rng = random.Random(seed)

    def params(self):
        return {"seed": self.seed}

    def _subset(self, hand):
        return tuple(c for c in hand if self.rng.random() < 0.5)

    def turn_choice(self, obs, ctx):
        return TurnChoice(self.rng.choice(ctx.options))

    def bid(self, obs, ctx):
        top = obs.wealth - obs.wealth % 10
        if top < ctx.min_bid or self.rng.random() < 0.5:
            return Bid(None)
        return Bid(self.rng.randrange(ctx.min_bid, top + 1, 10))

    def buy_right(self, obs, ctx):
        if not ctx.can_afford:
            return BuyRight(False)
        return BuyRight(self.rng.random() < 0.5)

    def tc_init(self, obs, ctx):
        t = self.rng.choice(ctx.targets)
        return TCInit(t.opponent, t.animal, self._subset(obs.money))

    def tc_defense(self, obs, ctx):
        if self.rng.random() < 0.5:
            return TCDefense(True)
        return TCDefense(False, self._subset(obs.money))

    def tc_tie_retry(self, obs, ctx):
        return TCOffer(self._subset(obs.money))
