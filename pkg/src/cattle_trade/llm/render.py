"""Plain-text rendering of observations, events and decision prompts."""
from __future__ import annotations

from typing import Iterable

from ..actions import DecisionContext, Observation
from ..animals import Animal
from ..events import Event
from . import prompts

NOTES_EMPTY = "(none yet)"


def _who(pid: int, viewer: int | None, start: bool = True) -> str:
    if pid == viewer:
        return "You" if start else "you"
    return f"Player {pid}"


def _animal_list(animals: dict[Animal, int]) -> str:
    items = sorted(((a, n) for a, n in animals.items() if n), key=lambda x: -x[0].points)
    return ", ".join(f"{n}x {a.label.capitalize()}" for a, n in items) or "none"


def _coins(cards: Iterable[int]) -> str:
    return ", ".join(f"{c} coins" for c in cards) or "none"


def _plain(cards: Iterable[int]) -> str:
    return ", ".join(str(c) for c in cards)


def turn_label(turn: int) -> int:
    return turn + 1


def describe_event(ev: Event, viewer: int | None) -> str | None:
    """One line for an event as seen by ``viewer``; None for events that are
    bookkeeping only. ``ev`` must already be redacted for the viewer."""
    d, t = ev.data, ev.type
    if t == "CardDrawn":
        if d.get("dealt"):
            return f"{_who(d['player'], viewer)} received a starting {d['animal']}"
        return f"{_who(d['player'], viewer)} drew {d['animal']} for auction"
    if t == "DonkeyPayout":
        return f"Donkey #{d['index']} drawn: every player receives {d['denomination']} coins"
    if t == "AuctionSold":
        line = f"{_who(d['bidder'], viewer)} won auction for {d['animal']} ({d['price']} coins)"
        if "total_paid" in d and d["total_paid"] != d["price"]:
            line += f", paid {d['total_paid']} with no change"
        return line
    if t == "BuyRightExercised":
        return (f"{_who(d['auctioneer'], viewer)} used buy-right on {d['animal']}, "
                f"paying {_who(d['bidder'], viewer, False)} {d['price']} coins")
    if t == "BuyRightRejected":
        return f"{_who(d['player'], viewer)} could not afford buy-right ({d['price']} coins); card sold"
    if t == "FreeAcquisition":
        return f"No bids: {_who(d['player'], viewer)} kept {d['animal']} for free"
    if t == "WealthRevealed":
        return (f"{_who(d['player'], viewer)} overbid {d['bid']} and revealed total wealth of "
                f"{d['total']} coins; auction restarts")
    if t == "BidderEliminated":
        return f"{_who(d['player'], viewer)} eliminated from this auction after a second overbid"
    if t == "TCInitiated":
        line = (f"Kuhhandel: {_who(d['initiator'], viewer)} challenged "
                f"{_who(d['target'], viewer, False)} for {d['animal']}")
        if "card_count" in d:
            line += f" with {d['card_count']} card(s)"
        if "offer_total" in d:
            line += f" (offer {d['offer_total']} coins)"
        return line
    if t == "TCRevealed":
        if viewer == d["initiator"]:
            mine, theirs = d["initiator_total"], d["target_total"]
        else:
            mine, theirs = d["target_total"], d["initiator_total"]
        return f"Kuhhandel offers swapped: you offered {mine}, they offered {theirs}"
    if t == "TCTie":
        return (f"Kuhhandel tie #{d['count']} between {_who(d['initiator'], viewer, False)} "
                f"and {_who(d['target'], viewer, False)}")
    if t == "TCResolved":
        winner = _who(d["winner"], viewer)
        how = "accepted" if d["accepted"] else "countered"
        line = f"{_who(d['target'], viewer)} {how}. {winner} won {d['cards_transferred']} {d['animal']}"
        if d.get("by_default"):
            line += " after repeated ties"
        return line + "."
    if t == "QuartetCompleted":
        return f"{_who(d['player'], viewer)} completed quartet ({d['animal']})"
    if t == "TurnPassed":
        return f"{_who(d['player'], viewer)} passed"
    if t == "GameEnded":
        return "Game over"
    return None


def event_lines(events: Iterable[Event], viewer: int | None) -> list[str]:
    out = []
    for ev in events:
        text = describe_event(ev, viewer)
        if text is not None:
            out.append(f"Turn {turn_label(ev.turn)}: {text}")
    return out


def render_observation(obs: Observation, notes: str | None = None, memory: str = "full") -> str:
    lines = [
        f"=== GAME STATE (You are Player {obs.player_id}) ===",
        f"Turn: {turn_label(obs.turn)}",
        f"Cards remaining in deck: {obs.deck_remaining}",
        "",
        "YOUR HAND:",
        f"  Money: {obs.wealth} coins total",
        f"  Money cards: {_coins(obs.money)}",
        f"  Animals: {_animal_list(obs.animals)}",
        "",
        "OTHER PLAYERS:",
    ]
    for o in obs.opponents:
        line = f"  Player {o.player_id}: {_animal_list(o.animals)} | {o.money_card_count} coin cards"
        if o.revealed_wealth is not None:
            line += f" | revealed {o.revealed_wealth} coins on turn {turn_label(o.revealed_turn or 0)}"
        lines.append(line)
    lines += ["", "VALID KUHHANDEL TARGETS:"]
    if obs.valid_targets:
        for t in obs.valid_targets:
            lines.append(f"  Player {t.opponent}: {t.animal.label} (you have {t.mine}, they have {t.theirs})")
    else:
        lines.append("  (none)")
    if memory == "full":
        lines += ["", "RECENT EVENTS (what you observed):"]
        lines += ["  " + s for s in event_lines(obs.recent_events, obs.player_id)] or ["  (none)"]
        lines += ["", "YOUR NOTES:"]
        text = notes.strip() if notes else ""
        lines += ["  " + s for s in text.splitlines()] if text else ["  " + NOTES_EMPTY]
    return "\n".join(lines)


def decision_prompt(obs: Observation, ctx: DecisionContext, observation_text: str,
                    tc_tie_limit: int = 3) -> str:
    wealth, cards = obs.wealth, _plain(obs.money)
    hand = "[" + _plain(obs.money) + "]"
    kind = ctx.kind
    if kind == "turn_choice":
        tpl = prompts.TURN_CHOICE if "auction" in ctx.options else prompts.TURN_CHOICE_FINAL
        return tpl.format(observation=observation_text)
    if kind == "bid":
        card = ctx.card
        winner = f"Player {ctx.standing_bidder}" if ctx.standing_bidder is not None else "none"
        tpl = {"canonical": prompts.BID_CANONICAL, "fast": prompts.BID_FAST,
               "legacy": prompts.BID_LEGACY}[ctx.mode]
        return tpl.format(observation=observation_text, round=ctx.round + 1, animal=card.label,
                          value=card.points, price=ctx.standing_bid or 0, winner=winner,
                          have=obs.count(card), wealth=wealth, cards=cards)
    if kind == "buy_right":
        card = ctx.card
        return prompts.BUY_RIGHT.format(observation=observation_text, animal=card.label,
                                        value=card.points, price=ctx.price, bidder=ctx.bidder,
                                        have=obs.count(card), wealth=wealth, cards=cards)
    if kind == "tc_init":
        targets = "\n".join(f"- Player {t.opponent}: {t.animal.label} (you have {t.mine}, they have {t.theirs})"
                            for t in ctx.targets)
        return prompts.TC_INIT.format(observation=observation_text, targets=targets, hand=hand)
    if kind == "tc_defense":
        return prompts.TC_DEFENSE.format(observation=observation_text, initiator=ctx.initiator,
                                         animal=ctx.animal.label, have=obs.count(ctx.animal),
                                         value=ctx.animal.points, size=ctx.trade_size,
                                         offer_count=ctx.offer_card_count, hand=hand)
    if kind == "tc_tie_retry":
        default_winner = "you win" if ctx.role == "initiator" else "the challenger wins"
        return prompts.TC_TIE.format(observation=observation_text, animal=ctx.animal.label,
                                     opponent=ctx.opponent, previous=ctx.previous_total or 0,
                                     ties=ctx.tie_count, limit=tc_tie_limit,
                                     default_winner=default_winner, hand=hand)
    raise ValueError(f"unknown decision kind {kind!r}")


def scratchpad_prompt(notes: str | None, new_events: list[str]) -> str:
    return prompts.SCRATCHPAD.format(notes=notes.strip() if notes and notes.strip() else prompts.EMPTY_NOTES,
                                     events="\n".join(new_events))
