from __future__ import annotations

from typing import Any

from ..actions import Action, DecisionContext, Observation


class Agent:
    """Decision interface shared by code agents and the LLM adapter.

    The engine calls ``decide`` for every pending decision, feeds every
    observable event to ``notify`` (already redacted for this seat) and calls
    ``end_turn`` after the seat's own turn. Anything appended to ``records``
    is written to the game log after the call that produced it.
    """

    name = "agent"

    def __init__(self) -> None:
        self.records: list[dict[str, Any]] = []

    def decide(self, obs: Observation, ctx: DecisionContext) -> Action:
        handler = getattr(self, ctx.kind)
        return handler(obs, ctx)

    def notify(self, event) -> None:
        pass

    def end_turn(self, obs: Observation) -> None:
        pass

    def drain_records(self) -> list[dict[str, Any]]:
        out, self.records = self.records, []
        return out

    def params(self) -> dict[str, Any]:
        return {}
