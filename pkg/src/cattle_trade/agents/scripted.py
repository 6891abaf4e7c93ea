from __future__ import annotations

from typing import Iterable

from .base import Agent


class ScriptedAgent(Agent):
    """Plays a fixed list of actions (or callables ``f(obs, ctx)``); passes
    through to ``fallback`` once the script runs out."""

    name = "scripted"

    def __init__(self, script: Iterable = (), fallback: Agent | None = None) -> None:
        super().__init__()
        self.script = list(script)
        self.fallback = fallback
        self.seen: list = []

    def notify(self, event) -> None:
        self.seen.append(event)
        if self.fallback is not None:
            self.fallback.notify(event)

    def decide(self, obs, ctx):
        if self.script:
            step = self.script.pop(0)
            return step(obs, ctx) if callable(step) else step
        if self.fallback is None:
            raise RuntimeError(f"script exhausted at {ctx.kind}")
        return self.fallback.decide(obs, ctx)
