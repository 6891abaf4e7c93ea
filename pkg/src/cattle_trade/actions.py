"""The agent-facing contract: observations, decision contexts and actions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

from .animals import Animal
from .events import Event, view
from .payment import is_submultiset
from .state import GameState, legal_tc_targets

DECISION_KINDS = ("turn_choice", "bid", "buy_right", "tc_init", "tc_defense", "tc_tie_retry")


@dataclass(frozen=True)
class TurnChoice:
    choice: str  # "auction", "kuhhandel" or "pass"


@dataclass(frozen=True)
class Bid:
    amount: int | None  # None means pass

    @property
    def is_pass(self) -> bool:
        return self.amount is None


@dataclass(frozen=True)
class BuyRight:
    buy: bool


@dataclass(frozen=True)
class TCInit:
    target: int
    animal: Animal
    cards: tuple[int, ...]


@dataclass(frozen=True)
class TCDefense:
    accept: bool
    cards: tuple[int, ...] = ()


@dataclass(frozen=True)
class TCOffer:
    cards: tuple[int, ...]


Action = Union[TurnChoice, Bid, BuyRight, TCInit, TCDefense, TCOffer]

PASS = Bid(None)


def action_to_dict(action: Action) -> dict[str, Any]:
    if isinstance(action, TurnChoice):
        return {"kind": "turn_choice", "choice": action.choice}
    if isinstance(action, Bid):
        return {"kind": "bid", "amount": action.amount}
    if isinstance(action, BuyRight):
        return {"kind": "buy_right", "buy": action.buy}
    if isinstance(action, TCInit):
        return {"kind": "tc_init", "target": action.target, "animal": action.animal.label,
                "cards": list(action.cards)}
    if isinstance(action, TCDefense):
        return {"kind": "tc_defense", "accept": action.accept, "cards": list(action.cards)}
    if isinstance(action, TCOffer):
        return {"kind": "tc_tie_retry", "cards": list(action.cards)}
    raise TypeError(f"not an action: {action!r}")


def action_from_dict(d: dict[str, Any]) -> Action:
    kind = d["kind"]
    if kind == "turn_choice":
        return TurnChoice(d["choice"])
    if kind == "bid":
        return Bid(d["amount"])
    if kind == "buy_right":
        return BuyRight(bool(d["buy"]))
    if kind == "tc_init":
        return TCInit(int(d["target"]), Animal.parse(d["animal"]), tuple(d["cards"]))
    if kind == "tc_defense":
        return TCDefense(bool(d["accept"]), tuple(d["cards"]))
    if kind == "tc_tie_retry":
        return TCOffer(tuple(d["cards"]))
    raise ValueError(f"unknown action kind {kind!r}")


@dataclass(frozen=True)
class TCTarget:
    opponent: int
    animal: Animal
    mine: int
    theirs: int


@dataclass
class DecisionContext:
    kind: str
    options: tuple[str, ...] = ()
    mode: str = "canonical"
    card: Animal | None = None
    auctioneer: int | None = None
    round: int = 0
    standing_bid: int | None = None
    standing_bidder: int | None = None
    min_bid: int = 10
    overbid_strikes: int = 0
    bidder: int | None = None
    price: int | None = None
    can_afford: bool = True
    targets: tuple[TCTarget, ...] = ()
    initiator: int | None = None
    target: int | None = None
    animal: Animal | None = None
    trade_size: int = 1
    offer_card_count: int | None = None
    tie_count: int = 0
    previous_total: int | None = None
    role: str | None = None

    @property
    def opponent(self) -> int | None:
        if self.role == "initiator":
            return self.target
        if self.role == "target":
            return self.initiator
        return None


@dataclass(frozen=True)
class OpponentView:
    player_id: int
    animals: dict[Animal, int]
    money_card_count: int
    revealed_wealth: int | None = None
    revealed_turn: int | None = None


@dataclass
class Observation:
    player_id: int
    turn: int
    deck_remaining: int
    num_players: int
    set_size: int
    animal_types: tuple[Animal, ...]
    donkeys_drawn: int
    money: tuple[int, ...]
    animals: dict[Animal, int]
    opponents: tuple[OpponentView, ...]
    valid_targets: tuple[TCTarget, ...]
    recent_events: tuple[Event, ...] = ()
    scores: dict[int, int] = field(default_factory=dict)

    @property
    def wealth(self) -> int:
        return sum(self.money)

    def count(self, animal: Animal) -> int:
        return self.animals.get(animal, 0)

    def opponent(self, pid: int) -> OpponentView:
        for o in self.opponents:
            if o.player_id == pid:
                return o
        raise KeyError(pid)


def tc_targets(state: GameState, player: int) -> tuple[TCTarget, ...]:
    me = state.players[player]
    return tuple(
        TCTarget(opp, animal, me.count(animal), state.players[opp].count(animal))
        for opp, animal in legal_tc_targets(state, player)
    )


def observe(state: GameState, player: int) -> Observation:
    """Everything ``player`` is entitled to know right now."""
    from .state import score

    cfg = state.config
    me = state.players[player]
    opponents = tuple(
        OpponentView(
            p.player_id,
            {a: n for a, n in p.animals.items() if n},
            len(p.money),
            p.revealed_total if p.wealth_revealed else None,
            p.revealed_turn if p.wealth_revealed else None,
        )
        for p in state.players if p.player_id != player
    )
    recent = recent_views(state.log, player, cfg.recent_events)
    return Observation(
        player_id=player,
        turn=state.turn,
        deck_remaining=len(state.deck),
        num_players=cfg.num_players,
        set_size=cfg.set_size,
        animal_types=cfg.animals,
        donkeys_drawn=state.donkeys_drawn,
        money=tuple(me.money),
        animals={a: n for a, n in me.animals.items() if n},
        opponents=opponents,
        valid_targets=tc_targets(state, player),
        recent_events=tuple(recent),
        scores={p.player_id: score(p, cfg.set_size) for p in state.players},
    )


# bookkeeping that would crowd the recent-events window without adding news
QUIET_EVENTS = frozenset({
    "Decision", "LLMCall", "AgentError", "FormatFailure", "ScratchpadUpdated", "TurnStarted",
    "AuctionOpened", "AuctionRound", "BidStanding", "AuctionRestarted", "TCAccepted",
    "TCCountered", "TCOffer", "GameStarted",
})


def recent_views(log: list[Event], player: int, n: int) -> list[Event]:
    out: list[Event] = []
    for ev in reversed(log):
        if len(out) >= n:
            break
        if ev.type in QUIET_EVENTS:
            continue
        v = view(ev, player)
        if v is not None:
            out.append(v)
    out.reverse()
    return out


def is_legal(action: Action, ctx: DecisionContext, hand: tuple[int, ...] | list[int]) -> bool:
    """Whether the engine would apply ``action`` unchanged."""
    kind = ctx.kind
    if kind == "turn_choice":
        return isinstance(action, TurnChoice) and action.choice in ctx.options
    if kind == "bid":
        if not isinstance(action, Bid):
            return False
        if action.amount is None:
            return True
        return (isinstance(action.amount, int) and action.amount % 10 == 0
                and action.amount >= ctx.min_bid)
    if kind == "buy_right":
        return isinstance(action, BuyRight)
    if kind == "tc_init":
        return (isinstance(action, TCInit)
                and any(t.opponent == action.target and t.animal == action.animal for t in ctx.targets)
                and _cards_ok(action.cards, hand))
    if kind == "tc_defense":
        return isinstance(action, TCDefense) and (action.accept or _cards_ok(action.cards, hand))
    if kind == "tc_tie_retry":
        return isinstance(action, TCOffer) and _cards_ok(action.cards, hand)
    raise ValueError(f"unknown decision kind {kind!r}")


def _cards_ok(cards: Any, hand: Any) -> bool:
    return (isinstance(cards, tuple) and all(isinstance(c, int) for c in cards)
            and is_submultiset(cards, hand))
