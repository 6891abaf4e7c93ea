from __future__ import annotations

from ..actions import Bid, BuyRight, DecisionContext, Observation, TCDefense, TCInit, TCOffer, TurnChoice
from .base import Agent
from .beliefs import Beliefs
from .heuristics import (
    DEFAULT_CONSTANTS,
    CodeAgentConstants,
    completion_gain,
    floor10,
    pay_cards,
    pursues,
    zero_cards,
)


class TrackerAgent(Agent):
    """Card counter: keeps wealth estimates for every opponent from public
    events and bids just past the strongest rival's budget on sets it leads."""

    name = "tracker"

    def __init__(self, seat: int, constants: CodeAgentConstants = DEFAULT_CONSTANTS) -> None:
        super().__init__()
        self.c = constants
        self.beliefs = Beliefs(seat, initial_wealth=constants.tracker_initial_wealth,
                              unseen_offer_share=constants.tracker_unseen_offer_share)

    def params(self):
        return {k: v for k, v in self.c.to_dict().items() if k.startswith("tracker_")}

    def notify(self, event) -> None:
        self.beliefs.update(event)

    # a card's worth in coins: share of the completion gain it represents
    def _value(self, obs: Observation, animal, cards: int = 1) -> int:
        mine = obs.count(animal)
        progress = min(mine + cards, obs.set_size) / obs.set_size
        return floor10(completion_gain(obs, animal) * progress * self.c.tracker_coins_per_point)

    def _tc_plan(self, obs: Observation, targets):
        best = None
        for t in targets:
            if t.mine < t.theirs:
                continue
            size = 2 if t.mine >= 2 and t.theirs >= 2 else 1
            est = self.beliefs.estimate(t.opponent)
            if est <= self.c.tracker_near_zero:
                cards = zero_cards(obs.money, 2) or ()
                cost = 0
            else:
                need = floor10(est * self.c.tracker_counter_share) + self.c.tracker_increment
                if need > obs.wealth:
                    continue
                cards = pay_cards(obs.money, need)
                cost = sum(cards)
            worth = self._value(obs, t.animal, size) * self.c.tracker_tc_value_share
            if cost > worth:
                continue
            key = (worth - cost, t.animal.points, -t.opponent)
            if best is None or key > best[0]:
                best = (key, TCInit(t.opponent, t.animal, cards))
        return None if best is None else best[1]

    def turn_choice(self, obs, ctx: DecisionContext):
        plan = self._tc_plan(obs, obs.valid_targets)
        if plan is not None:
            return TurnChoice("kuhhandel")
        return TurnChoice("auction" if "auction" in ctx.options else "pass")

    def bid(self, obs, ctx: DecisionContext):
        if ctx.standing_bidder == obs.player_id or not pursues(obs, ctx.card):
            return Bid(None)
        # rivals: whoever is already bidding or already collects this type
        rivals = [o.player_id for o in obs.opponents
                  if o.player_id != ctx.auctioneer
                  and (o.animals.get(ctx.card, 0) > 0 or o.player_id == ctx.standing_bidder)]
        rival_budget = max((self.beliefs.estimate(p) for p in rivals), default=0)
        amount = min(obs.wealth, rival_budget + self.c.tracker_increment,
                     max(ctx.min_bid, self._value(obs, ctx.card)))
        amount = floor10(max(amount, ctx.min_bid if ctx.min_bid <= obs.wealth else 0))
        return Bid(amount) if amount >= ctx.min_bid else Bid(None)

    def buy_right(self, obs, ctx: DecisionContext):
        completes = obs.count(ctx.card) == obs.set_size - 1
        return BuyRight(completes and obs.wealth >= ctx.price)

    def tc_init(self, obs, ctx: DecisionContext):
        plan = self._tc_plan(obs, ctx.targets)
        if plan is not None:
            return plan
        t = ctx.targets[0]
        return TCInit(t.opponent, t.animal, pay_cards(obs.money, self.beliefs.estimate(t.opponent) + 10))

    def tc_defense(self, obs, ctx: DecisionContext):
        if not any(c > 0 for c in obs.money):
            return TCDefense(True)
        est = self.beliefs.estimate(ctx.initiator)
        # never counter with more than the animals are worth to us
        worth = floor10(self._value(obs, ctx.animal, ctx.trade_size) * self.c.tracker_tc_value_share)
        return TCDefense(False, pay_cards(obs.money, min(est + self.c.tracker_increment, max(10, worth))))

    def tc_tie_retry(self, obs, ctx: DecisionContext):
        est = self.beliefs.estimate(ctx.opponent)
        return TCOffer(pay_cards(obs.money, est + self.c.tracker_increment))
