"""Re-drive a logged game from its header and recorded decisions."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .config import GameConfig
from .engine import Game, ReplayDivergence
from .events import AGENT_RECORDS, Event
from .logio import check_version, read_records
from .state import GameState


@dataclass
class ReplayResult:
    match: bool
    mismatch_index: int | None  # seq of the first differing logged event
    expected: dict[str, Any] | None
    actual: dict[str, Any] | None
    state: GameState | None
    message: str = ""


def _norm(ev: Event) -> dict[str, Any]:
    d = ev.to_dict()
    return json.loads(json.dumps(d))


def replay_records(records: Sequence[dict[str, Any]]) -> ReplayResult:
    check_version(records)
    head = records[0]
    config = GameConfig.from_dict(head["config"])
    decisions = [r for r in records if r["type"] == "Decision"]
    game = Game(config, None, names=head["agents"], agent_params=head.get("agent_params"),
                scripted=decisions)
    logged = [(r.get("seq", i), {k: v for k, v in r.items() if k != "seq"})
              for i, r in enumerate(records) if r["type"] not in AGENT_RECORDS]
    error = ""
    try:
        game.play()
    except ReplayDivergence as exc:
        error = str(exc)
    regenerated = [_norm(ev) for ev in game.state.log]
    for k, (seq, want) in enumerate(logged):
        got = regenerated[k] if k < len(regenerated) else None
        if got != want:
            return ReplayResult(False, seq, want, got, game.state, error or "event differs")
    if len(regenerated) != len(logged):
        extra = regenerated[len(logged)] if len(regenerated) > len(logged) else None
        return ReplayResult(False, len(records), None, extra, game.state, error or "length differs")
    if error:
        return ReplayResult(False, None, None, None, game.state, error)
    return ReplayResult(True, None, None, None, game.state, "match")


def replay(path: str | Path) -> ReplayResult:
    return replay_records(read_records(path))


def replay_events(events: Sequence[Event]) -> ReplayResult:
    return replay_records([ev.to_dict(i) for i, ev in enumerate(events)])
