"""Turning free-form model replies into legal actions.

Extraction runs in three stages (whole reply as JSON, last embedded JSON
object, loose key/value scraping) and the result is then repaired against
the decision context so the engine only ever sees legal actions.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Sequence

from ..actions import Action, Bid, BuyRight, DecisionContext, TCDefense, TCInit, TCOffer, TurnChoice
from ..animals import Animal
from ..engine import repair
from ..payment import greedy_offer, is_submultiset

_FENCE = re.compile(r"^```[a-zA-Z]*\s*|\s*```$")
_KEYS = ("action", "decision", "amount", "target_player", "target", "animal",
         "offer_cards", "counter_cards", "cards")
_NUM = re.compile(r"-?\d+(?:\.\d+)?")


@dataclass
class ParseResult:
    action: Action  # legal for the context
    stage: int | None  # 1, 2 or 3; None when every stage failed
    raw_action: Action | None = None  # interpretation before repair
    note: str | None = None  # repair note from the engine rules
    truncated: bool = False
    cards_missing: bool = False  # offered cards the player does not hold
    requested_cards: tuple[int, ...] | None = None

    @property
    def failed(self) -> bool:
        return self.stage is None


# -- extraction -----------------------------------------------------------

def _direct(text: str) -> dict | None:
    body = _FENCE.sub("", text.strip())
    try:
        obj = json.loads(body)
    except (ValueError, RecursionError):
        return None
    return obj if isinstance(obj, dict) else None


def _last_object(text: str) -> dict | None:
    dec = json.JSONDecoder()
    best: tuple[int, int, dict] | None = None
    for i, ch in enumerate(text):
        if ch != "{":
            continue
        try:
            obj, end = dec.raw_decode(text, i)
        except (ValueError, RecursionError):
            continue
        if isinstance(obj, dict) and (best is None or end > best[1]):
            best = (i, end, obj)
    return best[2] if best else None


def _scrape(text: str) -> dict | None:
    found: dict[str, Any] = {}
    for key in _KEYS:
        pat = re.compile(r'["\']?' + key + r'["\']?\s*[:=]\s*(\[[^\]]*\]?|"[^"]*"?|\'[^\']*\'?|[^,}\n]+)',
                         re.IGNORECASE)
        hits = pat.findall(text)
        if not hits:
            continue
        val = hits[-1].strip()
        if val.startswith("["):
            found[key] = [_int(x) for x in _NUM.findall(val)]
        else:
            val = val.strip("\"' ")
            nums = _NUM.findall(val)
            if re.fullmatch(r"-?\d+(?:\.\d+)?", val):
                found[key] = float(val) if "." in val else int(val)
            elif key in ("amount", "target_player", "target") and nums:
                found[key] = int(float(nums[0]))
            else:
                found[key] = val
    return found or None


def looks_truncated(text: str) -> bool:
    """An object was opened after the last one that closed."""
    last_open, last_close = text.rfind("{"), text.rfind("}")
    return last_open != -1 and last_open > last_close


def extract(text: str) -> tuple[dict | None, int | None]:
    for stage, fn in ((1, _direct), (2, _last_object), (3, _scrape)):
        obj = fn(text)
        if obj:
            return obj, stage
    return None, None


# -- interpretation -------------------------------------------------------

def _word(v: Any) -> str:
    return str(v).strip().lower() if v is not None else ""


def _int(v: Any) -> int | None:
    if isinstance(v, bool):
        return None
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return int(v) if v == v and abs(v) < 1e15 else None
    m = _NUM.search(str(v)) if v is not None else None
    if m:
        try:
            return int(float(m.group()))
        except (ValueError, OverflowError):
            return None
    return None


def _cards(v: Any) -> tuple[int, ...] | None:
    if v is None:
        return None
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        v = [v]
    if isinstance(v, str):
        v = _NUM.findall(v)
    if not isinstance(v, (list, tuple)):
        return None
    out = []
    for x in v:
        n = _int(x)
        if n is None:
            return None
        out.append(n)
    return tuple(out)


def _card_field(obj: dict, *keys: str) -> tuple[int, ...] | None:
    for key in (*keys, "offer_cards", "counter_cards", "cards"):
        if key in obj:
            return _cards(obj[key])
    return None


def interpret(obj: dict, ctx: DecisionContext) -> Action | None:
    """Map an extracted object onto the action type ``ctx`` asks for."""
    kind = ctx.kind
    word = _word(obj.get("action", obj.get("decision")))
    if kind == "turn_choice":
        for opt in ("kuhhandel", "auction", "pass"):
            if opt in word:
                return TurnChoice(opt)
        if "trade" in word:
            return TurnChoice("kuhhandel")
        return None
    if kind == "bid":
        amount = _int(obj.get("amount"))
        if word == "pass" or (word.startswith("pass") and amount is None):
            return Bid(None)
        if amount is None:
            return None
        return Bid(amount)
    if kind == "buy_right":
        word = _word(obj.get("decision", obj.get("action")))
        if "buy" in word:
            return BuyRight(True)
        if "sell" in word or "accept" in word:
            return BuyRight(False)
        return None
    if kind == "tc_init":
        target = _int(obj.get("target_player", obj.get("target")))
        try:
            animal = Animal.parse(obj.get("animal", ""))
        except ValueError:
            animal = None
        cards = _card_field(obj, "offer_cards")
        if target is None and animal is None and cards is None:
            return None
        return TCInit(target if target is not None else -1, animal, cards if cards is not None else ())
    if kind == "tc_defense":
        cards = _card_field(obj, "counter_cards")
        if "accept" in word:
            return TCDefense(True)
        if "counter" in word or (not word and cards is not None):
            return TCDefense(False, cards if cards is not None else ())
        return None
    if kind == "tc_tie_retry":
        cards = _card_field(obj, "offer_cards")
        return None if cards is None else TCOffer(cards)
    raise ValueError(f"unknown decision kind {kind!r}")


def _offered(action: Action | None) -> tuple[int, ...] | None:
    if isinstance(action, TCInit):
        return action.cards
    if isinstance(action, TCDefense) and not action.accept:
        return action.cards
    if isinstance(action, TCOffer):
        return action.cards
    return None


def safe_default(ctx: DecisionContext, hand: Sequence[int]) -> Action:
    """Conservative action used when nothing usable came back."""
    kind = ctx.kind
    if kind == "turn_choice":
        return TurnChoice("auction" if "auction" in ctx.options else "pass")
    if kind == "bid":
        return Bid(None)
    if kind == "buy_right":
        return BuyRight(False)
    if kind == "tc_init":
        t = ctx.targets[0]
        return TCInit(t.opponent, t.animal, greedy_offer(hand, [10]))
    if kind == "tc_defense":
        return TCDefense(True)
    if kind == "tc_tie_retry":
        return TCOffer(greedy_offer(hand, [10]))
    raise ValueError(f"unknown decision kind {kind!r}")


def parse_action(raw: Any, ctx: DecisionContext, hand: Sequence[int],
                 finish_reason: str | None = None) -> ParseResult:
    """Total: any input yields a legal action for ``ctx``."""
    if isinstance(raw, bytes):
        text = raw.decode("utf-8", errors="replace")
    else:
        text = "" if raw is None else str(raw)
    truncated = finish_reason == "length"
    obj, stage = None, None
    for st, fn in ((1, _direct), (2, _last_object)):
        obj = fn(text)
        if obj:
            stage = st
            break
    if obj is None:
        truncated = truncated or looks_truncated(text)
        obj = _scrape(text)
        stage = 3 if obj else None
    raw_action = interpret(obj, ctx) if obj else None
    if raw_action is None:
        return ParseResult(safe_default(ctx, hand), None, None, "format_failure", truncated)
    offered = _offered(raw_action)
    missing = offered is not None and not is_submultiset(offered, hand)
    action, note = repair(raw_action, ctx, hand)
    return ParseResult(action, stage, raw_action, note, truncated, missing, offered)
