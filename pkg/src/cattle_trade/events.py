"""Event records and the per-viewer redaction rules.

The full log keeps every field, including hidden ones (offer values,
payment cards, overbid flags). Agents only ever receive ``view(event, i)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

SCHEMA_VERSION = 1

EVENT_TYPES = (
    "GameStarted",
    "TurnStarted",
    "Decision",
    "CardDrawn",
    "AuctionOpened",
    "DonkeyPayout",
    "AuctionRound",
    "BidStanding",
    "WealthRevealed",
    "BidderEliminated",
    "AuctionRestarted",
    "AuctionSold",
    "BuyRightRejected",
    "BuyRightExercised",
    "FreeAcquisition",
    "TCInitiated",
    "TCAccepted",
    "TCCountered",
    "TCRevealed",
    "TCTie",
    "TCOffer",
    "TCResolved",
    "QuartetCompleted",
    "TurnPassed",
    "ScratchpadUpdated",
    "FormatFailure",
    "LLMCall",
    "AgentError",
    "GameEnded",
)

# records produced by agents rather than by the rules; replay does not
# regenerate them
AGENT_RECORDS = frozenset({"ScratchpadUpdated", "FormatFailure", "LLMCall", "AgentError"})


@dataclass
class Event:
    type: str
    turn: int
    data: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Any:
        return self.data[key]

    def get(self, key: str, default: Any = None) -> Any:
        return self.data.get(key, default)

    def to_dict(self, seq: int | None = None) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if seq is not None:
            out["seq"] = seq
        out["type"] = self.type
        out["turn"] = self.turn
        out.update(self.data)
        return out

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "Event":
        data = {k: v for k, v in raw.items() if k not in ("seq", "type", "turn")}
        return cls(raw["type"], int(raw["turn"]), data)


def _participants(ev: Event) -> set[int]:
    return {ev.data["initiator"], ev.data["target"]}


def _player(ev: Event) -> set[int]:
    return {ev.data["player"]}


def _payer_payee(ev: Event) -> set[int]:
    return {ev.data["payer"], ev.data["payee"]}


# whole event visible only to this audience
PRIVATE_EVENTS = {
    "Decision": _player,
    "ScratchpadUpdated": _player,
    "FormatFailure": _player,
    "LLMCall": _player,
    "AgentError": _player,
    "TCRevealed": _participants,
    "TCTie": _participants,
    "TCOffer": _player,
}

# field -> audience; fields stripped for everyone outside the audience
PRIVATE_FIELDS: dict[str, dict[str, Any]] = {
    "AuctionRound": {"over_wealth": lambda ev: set()},
    "AuctionSold": {"cards_paid": _payer_payee, "total_paid": _payer_payee},
    "BuyRightExercised": {"cards_paid": _payer_payee, "total_paid": _payer_payee},
    "TCInitiated": {
        "card_count": _participants,
        "offer": lambda ev: {ev.data["initiator"]},
        "offer_total": lambda ev: {ev.data["initiator"]},
    },
    "TCAccepted": {"offer": _participants, "offer_total": _participants},
    "TCCountered": {
        "card_count": _participants,
        "counter": lambda ev: {ev.data["target"]},
        "counter_total": lambda ev: {ev.data["target"]},
    },
    "GameEnded": {"state_digest": lambda ev: set()},
}


def visible_to(ev: Event, viewer: int) -> bool:
    rule = PRIVATE_EVENTS.get(ev.type)
    return rule is None or viewer in rule(ev)


def hidden_fields(ev: Event, viewer: int) -> list[str]:
    """Fields of ``ev`` that ``viewer`` may not see (the whole event if invisible)."""
    if not visible_to(ev, viewer):
        return list(ev.data)
    rules = PRIVATE_FIELDS.get(ev.type, {})
    return [f for f, audience in rules.items() if f in ev.data and viewer not in audience(ev)]


def view(ev: Event, viewer: int) -> Event | None:
    """The event as ``viewer`` observes it, or None when it is invisible to them."""
    if not visible_to(ev, viewer):
        return None
    drop = set(hidden_fields(ev, viewer))
    if not drop:
        return Event(ev.type, ev.turn, dict(ev.data))
    return Event(ev.type, ev.turn, {k: v for k, v in ev.data.items() if k not in drop})


def views(events: Iterable[Event], viewer: int) -> list[Event]:
    out = []
    for ev in events:
        v = view(ev, viewer)
        if v is not None:
            out.append(v)
    return out
