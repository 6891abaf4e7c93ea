"""Turn loop, auction modes, buy-right and trade challenges."""
from __future__ import annotations

import logging
from typing import Any, Iterable, Iterator, Sequence

from .actions import (
    PASS,
    Action,
    Bid,
    BuyRight,
    DecisionContext,
    TCDefense,
    TCInit,
    TCOffer,
    TurnChoice,
    action_from_dict,
    action_to_dict,
    observe,
    tc_targets,
)
from .animals import Animal, donkey_payout
from .config import ConfigError, GameConfig
from .events import view
from .payment import greedy_offer, is_submultiset, remove_cards, settle
from .state import GameState, any_legal_tc, completed_sets, new_game, score

log = logging.getLogger(__name__)


class ReplayDivergence(Exception):
    """The recorded decision stream no longer fits the regenerated game."""


class GameAborted(Exception):
    """Raised by an agent that wants the game stopped rather than defaulted."""


def is_terminal(state: GameState) -> bool:
    if state.terminal or state.turn >= state.config.max_turns:
        return True
    if state.deck:
        return False
    return not any_legal_tc(state) or state.consecutive_passes >= state.config.num_players


def _floor10(x: int) -> int:
    return x - x % 10


def _as_cards(cards: Any) -> list[int]:
    try:
        return [int(c) for c in cards if not isinstance(c, bool)]
    except (TypeError, ValueError):
        return []


def repair(action: Any, ctx: DecisionContext, hand: Sequence[int]) -> tuple[Action, str | None]:
    """Coerce an agent's answer into a legal action for ``ctx``.

    Returns the action the engine applies and a short note when it differs
    from what was submitted.
    """
    kind = ctx.kind
    if kind == "turn_choice":
        if isinstance(action, TurnChoice) and action.choice in ctx.options:
            return action, None
        return TurnChoice("auction" if "auction" in ctx.options else "pass"), "invalid_choice"

    if kind == "bid":
        if not isinstance(action, Bid):
            return PASS, "malformed"
        if action.amount is None:
            return PASS, None
        if isinstance(action.amount, bool):
            return PASS, "malformed"
        try:
            amount = int(action.amount)
        except (TypeError, ValueError, OverflowError):
            return PASS, "malformed"
        note = None
        if amount % 10:
            amount = _floor10(amount)
            note = "rounded_down"
        if amount <= 0:
            return PASS, "non_positive"
        if amount < ctx.min_bid:
            return Bid(ctx.min_bid), "clamped_up"
        return Bid(amount), note

    if kind == "buy_right":
        if isinstance(action, BuyRight) and isinstance(action.buy, bool):
            return action, None
        return BuyRight(False), "malformed"

    if kind == "tc_init":
        pairs = [(t.opponent, t.animal) for t in ctx.targets]
        note = None
        if isinstance(action, TCInit) and (action.target, action.animal) in pairs:
            target, animal = action.target, action.animal
            requested = _as_cards(action.cards)
        else:
            target, animal = pairs[0]
            note = "invalid_target"
            requested = _as_cards(action.cards) if isinstance(action, TCInit) else [10]
        cards = tuple(requested)
        if not (isinstance(action, TCInit) and isinstance(action.cards, tuple)
                and list(action.cards) == requested and is_submultiset(cards, hand)):
            cards = greedy_offer(hand, requested)
            note = note or "cards_not_in_hand"
        return TCInit(target, animal, tuple(sorted(cards, reverse=True))), note

    if kind == "tc_defense":
        if not isinstance(action, TCDefense) or not isinstance(action.accept, bool):
            return TCDefense(True), "malformed"
        if action.accept:
            return TCDefense(True), None
        requested = _as_cards(action.cards)
        if isinstance(action.cards, tuple) and list(action.cards) == requested \
                and is_submultiset(requested, hand):
            return TCDefense(False, tuple(sorted(requested, reverse=True))), None
        return TCDefense(False, greedy_offer(hand, requested)), "cards_not_in_hand"

    if kind == "tc_tie_retry":
        requested = _as_cards(action.cards) if isinstance(action, TCOffer) else []
        if isinstance(action, TCOffer) and isinstance(action.cards, tuple) \
                and list(action.cards) == requested and is_submultiset(requested, hand):
            return TCOffer(tuple(sorted(requested, reverse=True))), None
        return TCOffer(greedy_offer(hand, requested)), "cards_not_in_hand"

    raise ValueError(f"unknown decision kind {kind!r}")


class Game:
    """One game: owns the state and drives the agents through it.

    ``scripted`` replays a recorded decision stream instead of asking agents.
    ``on_decision(state, player, ctx)`` is called before every live decision.
    """

    def __init__(self, config: GameConfig, agents: Sequence[Any] | None,
                 names: Sequence[str] | None = None,
                 agent_params: dict[str, Any] | None = None,
                 *, scripted: Iterable[dict[str, Any]] | None = None,
                 on_decision: Any = None) -> None:
        config.validate()
        if agents is not None and len(agents) != config.num_players:
            raise ConfigError(f"{len(agents)} agents for {config.num_players} seats")
        if names is None:
            names = [getattr(a, "name", f"player{i}") for i, a in enumerate(agents or [None] * config.num_players)]
        self.agents = list(agents) if agents is not None else None
        self.state = new_game(config, list(names), agent_params)
        self.on_decision = on_decision
        self._script: Iterator[dict[str, Any]] | None = iter(scripted) if scripted is not None else None
        self._cursor = [0] * config.num_players
        if self.agents is None and self._script is None:
            raise ConfigError("either agents or a scripted decision stream is required")

    # -- driving ---------------------------------------------------------

    def play(self) -> GameState:
        while not self.state.terminal:
            self.run_turn()
        return self.state

    def run_turn(self) -> GameState:
        st = self.state
        if st.terminal:
            raise RuntimeError("game is over")
        if is_terminal(st):
            self._finish()
            return st
        p = st.active_player
        st.emit("TurnStarted", player=p, deck_remaining=len(st.deck))
        has_targets = bool(tc_targets(st, p))
        if st.deck:
            choice = "auction"
            if has_targets:
                choice = self._ask(p, DecisionContext("turn_choice", options=("auction", "kuhhandel"))).choice
            if choice == "kuhhandel":
                self._trade_challenge(p)
            else:
                self._auction(p)
            st.consecutive_passes = 0
        else:
            choice = "pass"
            if has_targets:
                choice = self._ask(p, DecisionContext("turn_choice", options=("kuhhandel", "pass"))).choice
            if choice == "kuhhandel":
                self._trade_challenge(p)
                st.consecutive_passes = 0
            else:
                st.emit("TurnPassed", player=p, forced=not has_targets)
                st.consecutive_passes += 1
        self._end_turn(p)
        st.turn += 1
        st.active_player = (p + 1) % st.config.num_players
        if is_terminal(st):
            self._finish()
        return st

    def _finish(self) -> None:
        st = self.state
        cfg = st.config
        if st.turn >= cfg.max_turns:
            st.end_reason = "max_turns"
        elif not any_legal_tc(st):
            st.end_reason = "no_trades_left"
        else:
            st.end_reason = "pass_rotation"
        st.terminal = True
        scores = [score(p, cfg.set_size) for p in st.players]
        wealth = [p.wealth for p in st.players]
        order = sorted(range(cfg.num_players), key=lambda i: (-scores[i], -wealth[i], i))
        ranks = [0] * cfg.num_players
        for r, i in enumerate(order, start=1):
            ranks[i] = r
        st.emit(
            "GameEnded",
            scores=scores,
            wealth=wealth,
            ranks=ranks,
            quartets=[[a.label for a in completed_sets(p.animals, cfg.set_size)] for p in st.players],
            reason=st.end_reason,
            turns=st.turn,
            state_digest=st.digest(),
        )
        if self.agents is not None and self._script is None:
            for i in range(cfg.num_players):
                self._flush(i)

    # -- agent plumbing --------------------------------------------------

    def _flush(self, player: int) -> None:
        agent = self.agents[player]
        notify = getattr(agent, "notify", None)
        log_ = self.state.log
        start = self._cursor[player]
        self._cursor[player] = len(log_)
        if notify is None:
            return
        for ev in log_[start:]:
            v = view(ev, player)
            if v is not None:
                notify(v)

    def _drain(self, player: int) -> None:
        drain = getattr(self.agents[player], "drain_records", None)
        if drain is None:
            return
        for rec in drain():
            rec = dict(rec)
            type_ = rec.pop("type")
            rec.pop("player", None)
            self.state.emit(type_, player=player, **rec)

    def _ask(self, player: int, ctx: DecisionContext) -> Action:
        st = self.state
        if self._script is not None:
            rec = next(self._script, None)
            if rec is None or rec.get("player") != player or rec.get("kind") != ctx.kind:
                raise ReplayDivergence(
                    f"engine asked player {player} for {ctx.kind!r} at event {len(st.log)}, "
                    f"log has {None if rec is None else (rec.get('player'), rec.get('kind'))}"
                )
            action = action_from_dict(rec["applied"])
            st.emit("Decision", player=player, kind=ctx.kind, applied=rec["applied"], note=rec.get("note"))
            return action

        hand = tuple(st.players[player].money)
        self._flush(player)
        if self.on_decision is not None:
            self.on_decision(st, player, ctx)
        agent = self.agents[player]
        try:
            raw = agent.decide(observe(st, player), ctx)
        except GameAborted:
            raise
        except Exception as exc:  # agent failures fall back, never abort the game
            log.warning("agent %s failed on %s: %r", player, ctx.kind, exc)
            st.emit("AgentError", player=player, kind=ctx.kind, error=repr(exc)[:300])
            raw = None
        self._drain(player)
        action, note = repair(raw, ctx, hand)
        st.emit("Decision", player=player, kind=ctx.kind, applied=action_to_dict(action), note=note)
        return action

    def _end_turn(self, player: int) -> None:
        if self._script is not None:
            return
        agent = self.agents[player]
        hook = getattr(agent, "end_turn", None)
        if hook is None:
            return
        self._flush(player)
        try:
            hook(observe(self.state, player))
        except GameAborted:
            raise
        except Exception as exc:
            self.state.emit("AgentError", player=player, kind="end_turn", error=repr(exc)[:300])
        self._drain(player)

    # -- animals and money -----------------------------------------------

    def _give(self, player: int, animal: Animal, n: int = 1) -> None:
        p = self.state.players[player]
        k = self.state.config.set_size
        before = p.count(animal)
        p.animals[animal] += n
        if before < k <= p.count(animal):
            self.state.emit("QuartetCompleted", player=player, animal=animal.label)

    def _take(self, player: int, animal: Animal, n: int) -> None:
        p = self.state.players[player]
        if p.count(animal) < n:
            raise AssertionError(f"player {player} holds {p.count(animal)} {animal}, cannot give {n}")
        p.animals[animal] -= n
        if not p.animals[animal]:
            del p.animals[animal]

    def _pay(self, payer: int, payee: int, amount: int):
        st = self.state
        s = settle(st.players[payer].money, amount)
        st.players[payer].money = remove_cards(st.players[payer].money, s.cards_paid)
        st.players[payee].add_money(s.cards_paid)
        return s

    def _escrow(self, player: int, cards: Sequence[int]) -> list[int]:
        st = self.state
        st.players[player].money = remove_cards(st.players[player].money, cards)
        st.escrow[player] = list(cards)
        return list(cards)

    # -- auctions ----------------------------------------------------------

    def _auction(self, auctioneer: int) -> None:
        st = self.state
        cfg = st.config
        card = st.deck.pop(0)
        st.card_in_auction = card
        st.emit("CardDrawn", player=auctioneer, animal=card.label, deck_remaining=len(st.deck))
        if card is Animal.DONKEY:
            amount = donkey_payout(st.donkeys_drawn)
            st.donkeys_drawn += 1
            for p in st.players:
                p.add_money([amount])
            st.emit("DonkeyPayout", index=st.donkeys_drawn, denomination=amount,
                    total=amount * cfg.num_players)
        n = cfg.num_players
        bidders = [(auctioneer + i) % n for i in range(1, n)]
        priority = st.rng.sample(bidders, len(bidders))
        st.emit("AuctionOpened", auctioneer=auctioneer, animal=card.label, mode=cfg.auction_mode,
                priority=priority, phase=st.donkeys_drawn)
        runner = {"canonical": self._canonical, "fast": self._fast, "legacy": self._legacy}[cfg.auction_mode]
        result = runner(auctioneer, card, bidders, priority)
        if result is None:
            st.emit("FreeAcquisition", player=auctioneer, animal=card.label)
            st.card_in_auction = None
            self._give(auctioneer, card)
        else:
            self._buy_right(auctioneer, card, *result)

    def _bid_ctx(self, player: int, card: Animal, auctioneer: int, rnd: int,
                 standing: int | None, standing_bidder: int | None, strikes: int = 0) -> DecisionContext:
        return DecisionContext(
            "bid", mode=self.state.config.auction_mode, card=card, auctioneer=auctioneer, round=rnd,
            standing_bid=standing, standing_bidder=standing_bidder,
            min_bid=(standing or 0) + 10, overbid_strikes=strikes,
        )

    def _canonical(self, auctioneer: int, card: Animal, bidders: list[int],
                   priority: list[int]) -> tuple[int, int] | None:
        st = self.state
        strikes = {p: 0 for p in bidders}
        eliminated: set[int] = set()
        standing: int | None = None
        leader: int | None = None
        rnd = 0
        rounds_run = 0
        while True:
            eligible = [p for p in bidders if p not in eliminated]
            bids: list[tuple[int, int]] = []
            passes: list[int] = []
            notes: list[dict[str, Any]] = []
            over: list[int] = []
            capped_out: list[int] = []
            if rounds_run < st.config.max_auction_rounds:
                for p in eligible:
                    ctx = self._bid_ctx(p, card, auctioneer, rnd, standing, leader, strikes[p])
                    action = self._ask(p, ctx)
                    note = st.log[-1].data["note"]
                    if note:
                        notes.append({"player": p, "note": note})
                    if action.amount is None:
                        passes.append(p)
                        continue
                    wealth = st.players[p].wealth
                    if action.amount > wealth:
                        over.append(p)
                        if strikes[p] >= 1:
                            capped_out.append(p)
                            continue
                    bids.append((p, action.amount))
                rounds_run += 1
                st.emit("AuctionRound", round=rnd, bids=[{"player": p, "amount": a} for p, a in bids],
                        passes=passes, notes=notes, over_wealth=over, phase=st.donkeys_drawn)
                for p in capped_out:
                    strikes[p] += 1
                    eliminated.add(p)
                    st.emit("BidderEliminated", player=p, strikes=strikes[p])
            if bids:
                top = max(a for _, a in bids)
                leader = min((p for p, a in bids if a == top), key=priority.index)
                standing = top
                st.emit("BidStanding", bidder=leader, amount=top, round=rnd)
                rnd += 1
                continue
            if standing is None:
                if rnd == 0 and rounds_run < st.config.max_auction_rounds and eligible:
                    rnd = 1  # one confirmation round before the card goes free
                    continue
                return None
            wealth = st.players[leader].wealth
            if standing > wealth:
                strikes[leader] += 1
                pl = st.players[leader]
                pl.wealth_revealed = True
                pl.revealed_total = wealth
                pl.revealed_turn = st.turn
                st.emit("WealthRevealed", player=leader, total=wealth, bid=standing)
                if strikes[leader] >= 2:
                    eliminated.add(leader)
                    st.emit("BidderEliminated", player=leader, strikes=strikes[leader])
                st.emit("AuctionRestarted", reason="overbid", player=leader)
                standing = leader = None
                rnd = 0
                if rounds_run >= st.config.max_auction_rounds:
                    return None
                continue
            return leader, standing

    def _fast(self, auctioneer: int, card: Animal, bidders: list[int],
              priority: list[int]) -> tuple[int, int] | None:
        st = self.state
        bids: list[tuple[int, int]] = []
        passes: list[int] = []
        notes: list[dict[str, Any]] = []
        over: list[int] = []
        for p in bidders:
            action = self._ask(p, self._bid_ctx(p, card, auctioneer, 0, None, None))
            note = st.log[-1].data["note"]
            if note:
                notes.append({"player": p, "note": note})
            if action.amount is None:
                passes.append(p)
                continue
            wealth = st.players[p].wealth
            amount = action.amount
            if amount > wealth:
                over.append(p)
                amount = _floor10(wealth)
                notes.append({"player": p, "note": "clamped_to_wealth"})
                if amount < 10:
                    passes.append(p)
                    continue
            bids.append((p, amount))
        st.emit("AuctionRound", round=0, bids=[{"player": p, "amount": a} for p, a in bids],
                passes=passes, notes=notes, over_wealth=over, phase=st.donkeys_drawn)
        if not bids:
            return None
        top = max(a for _, a in bids)
        winner = min((p for p, a in bids if a == top), key=priority.index)
        st.emit("BidStanding", bidder=winner, amount=top, round=0)
        return winner, top

    def _legacy(self, auctioneer: int, card: Animal, bidders: list[int],
                priority: list[int]) -> tuple[int, int] | None:
        st = self.state
        active = set(bidders)
        standing: int | None = None
        leader: int | None = None
        i = 0
        step = 0
        while step < st.config.max_auction_rounds:
            if not [q for q in bidders if q in active and q != leader]:
                break
            p = bidders[i % len(bidders)]
            i += 1
            if p not in active or p == leader:
                continue
            action = self._ask(p, self._bid_ctx(p, card, auctioneer, step, standing, leader))
            notes: list[dict[str, Any]] = []
            note = st.log[-1].data["note"]
            if note:
                notes.append({"player": p, "note": note})
            over: list[int] = []
            amount = action.amount
            if amount is not None and amount > st.players[p].wealth:
                over.append(p)
                amount = _floor10(st.players[p].wealth)
                notes.append({"player": p, "note": "clamped_to_wealth"})
                if amount < (standing or 0) + 10:
                    amount = None
            if amount is None:
                active.discard(p)
                st.emit("AuctionRound", round=step, bids=[], passes=[p], notes=notes,
                        over_wealth=over, phase=st.donkeys_drawn)
            else:
                standing, leader = amount, p
                st.emit("AuctionRound", round=step, bids=[{"player": p, "amount": amount}], passes=[],
                        notes=notes, over_wealth=over, phase=st.donkeys_drawn)
                st.emit("BidStanding", bidder=p, amount=amount, round=step)
            step += 1
        if standing is None:
            return None
        return leader, standing

    def _buy_right(self, auctioneer: int, card: Animal, bidder: int, price: int) -> None:
        st = self.state
        auc = st.players[auctioneer]
        ctx = DecisionContext("buy_right", mode=st.config.auction_mode, card=card, auctioneer=auctioneer,
                              bidder=bidder, price=price, can_afford=auc.wealth >= price)
        action = self._ask(auctioneer, ctx)
        if action.buy and auc.wealth >= price:
            s = self._pay(auctioneer, bidder, price)
            st.emit("BuyRightExercised", auctioneer=auctioneer, bidder=bidder, animal=card.label,
                    price=price, payer=auctioneer, payee=bidder,
                    cards_paid=list(s.cards_paid), total_paid=s.total_paid)
            st.card_in_auction = None
            self._give(auctioneer, card)
            return
        if action.buy:
            st.emit("BuyRightRejected", player=auctioneer, bidder=bidder, price=price)
        s = self._pay(bidder, auctioneer, price)
        st.emit("AuctionSold", auctioneer=auctioneer, bidder=bidder, animal=card.label, price=price,
                payer=bidder, payee=auctioneer, cards_paid=list(s.cards_paid), total_paid=s.total_paid)
        st.card_in_auction = None
        self._give(bidder, card)

    # -- trade challenges ------------------------------------------------

    def _trade_challenge(self, initiator: int) -> None:
        st = self.state
        targets = tc_targets(st, initiator)
        action = self._ask(initiator, DecisionContext("tc_init", targets=targets))
        target, animal = action.target, action.animal
        me, them = st.players[initiator], st.players[target]
        size = 2 if me.count(animal) >= 2 and them.count(animal) >= 2 else 1
        offer = self._escrow(initiator, action.cards)
        st.emit("TCInitiated", initiator=initiator, target=target, animal=animal.label, trade_size=size,
                card_count=len(offer), offer=offer, offer_total=sum(offer))
        defense = self._ask(target, DecisionContext(
            "tc_defense", initiator=initiator, target=target, animal=animal, trade_size=size,
            offer_card_count=len(offer), role="target"))
        ties = 0
        by_default = False
        if defense.accept:
            st.escrow.pop(initiator)
            them.add_money(offer)
            st.emit("TCAccepted", initiator=initiator, target=target, animal=animal.label,
                    offer=offer, offer_total=sum(offer))
            winner, loser = initiator, target
        else:
            counter = self._escrow(target, defense.cards)
            st.emit("TCCountered", initiator=initiator, target=target, animal=animal.label,
                    card_count=len(counter), counter=counter, counter_total=sum(counter))
            while True:
                off = st.escrow.pop(initiator)
                cnt = st.escrow.pop(target)
                me.add_money(cnt)
                them.add_money(off)
                st.emit("TCRevealed", initiator=initiator, target=target, animal=animal.label,
                        initiator_cards=off, target_cards=cnt,
                        initiator_total=sum(off), target_total=sum(cnt), tie_count=ties)
                if sum(off) != sum(cnt):
                    winner, loser = (initiator, target) if sum(off) > sum(cnt) else (target, initiator)
                    break
                ties += 1
                st.emit("TCTie", initiator=initiator, target=target, count=ties)
                if ties >= st.config.tc_tie_limit:
                    winner, loser, by_default = initiator, target, True
                    break
                for role, pid, prev in (("initiator", initiator, sum(off)), ("target", target, sum(cnt))):
                    retry = self._ask(pid, DecisionContext(
                        "tc_tie_retry", initiator=initiator, target=target, animal=animal,
                        trade_size=size, tie_count=ties, previous_total=prev, role=role))
                    cards = self._escrow(pid, retry.cards)
                    st.emit("TCOffer", player=pid, initiator=initiator, target=target,
                            card_count=len(cards), cards=cards, total=sum(cards), tie_count=ties)
        st.emit("TCResolved", initiator=initiator, target=target, animal=animal.label,
                winner=winner, loser=loser, cards_transferred=size, accepted=defense.accept,
                ties=ties, by_default=by_default)
        self._take(loser, animal, size)
        self._give(winner, animal, size)


def run_game(config: GameConfig, agents: Sequence[Any], names: Sequence[str] | None = None,
             agent_params: dict[str, Any] | None = None, **kwargs: Any) -> GameState:
    return Game(config, agents, names, agent_params, **kwargs).play()
