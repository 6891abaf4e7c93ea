"""Language-model player."""
from __future__ import annotations

from typing import Any

from ..actions import Action, DecisionContext, Observation
from ..agents.base import Agent
from ..engine import GameAborted
from ..events import Event
from . import prompts
from .client import ChatClient, EndpointError, EndpointUnavailable
from .parse import parse_action, safe_default
from .render import decision_prompt, event_lines, render_observation, scratchpad_prompt

SCRATCHPAD_CHARS = 1200  # about 300 tokens at 4 characters each
RETRY_TOKENS = 512


class LLMAgent(Agent):
    """Prompts a chat model for every decision.

    ``on_endpoint_failure`` is ``"default"`` (play the safe default and log an
    AgentError) or ``"abort"`` (let the error end the game).
    """

    name = "llm"

    def __init__(self, client: ChatClient, *, character: str = "optimal", memory: str = "full",
                 scratchpad_chars: int = SCRATCHPAD_CHARS, tc_tie_limit: int = 3,
                 on_endpoint_failure: str = "default") -> None:
        super().__init__()
        if memory not in ("full", "none"):
            raise ValueError(f"unknown memory mode {memory!r}")
        if on_endpoint_failure not in ("default", "abort"):
            raise ValueError(f"unknown endpoint failure policy {on_endpoint_failure!r}")
        self.client = client
        self.system = prompts.system_prompt(character)
        self.character = character
        self.memory = memory
        self.scratchpad_chars = scratchpad_chars
        self.tc_tie_limit = tc_tie_limit
        self.on_endpoint_failure = on_endpoint_failure
        self.notes = ""
        self._pending: list[Event] = []
        self.decisions = 0
        self.format_failures = 0

    def params(self) -> dict[str, Any]:
        cfg = self.client.config
        return {"provider": cfg.provider, "model": cfg.model, "temperature": cfg.temperature,
                "max_tokens": cfg.max_tokens, "reasoning_effort": cfg.reasoning_effort,
                "character": self.character, "memory": self.memory}

    def notify(self, event: Event) -> None:
        if self.memory == "full":
            self._pending.append(event)

    # -- model calls ------------------------------------------------------

    def _call(self, purpose: str, kind: str, messages: list[dict[str, str]], **kw: Any):
        out = self.client.complete(self.system, messages, **kw)
        self.records.append({
            "type": "LLMCall", "purpose": purpose, "kind": kind, "model": self.client.config.model,
            "prompt_tokens": out.prompt_tokens, "completion_tokens": out.completion_tokens,
            "latency": round(out.latency, 4), "attempts": out.attempts,
            "finish_reason": out.finish_reason, "response": out.text,
        })
        return out

    def decide(self, obs: Observation, ctx: DecisionContext) -> Action:
        self.decisions += 1
        hand = obs.money
        try:
            return self._decide(obs, ctx, hand)
        except (EndpointUnavailable, EndpointError) as exc:
            if self.on_endpoint_failure == "abort":
                raise GameAborted(str(exc)) from exc
            self.records.append({"type": "AgentError", "kind": ctx.kind, "error": str(exc)[:300]})
            return safe_default(ctx, hand)

    def _decide(self, obs: Observation, ctx: DecisionContext, hand) -> Action:
        text = render_observation(obs, self.notes, self.memory)
        user = decision_prompt(obs, ctx, text, self.tc_tie_limit)
        fmt = "turn_choice_final" if ctx.kind == "turn_choice" and "auction" not in ctx.options else ctx.kind
        instruction = prompts.response_instruction(fmt)
        messages = [{"role": "user", "content": user}]

        out = self._call("decision", ctx.kind, messages)
        res = parse_action(out.text, ctx, hand, out.finish_reason)
        if res.truncated and res.stage in (None, 3):
            follow = messages + [{"role": "assistant", "content": out.text},
                                 {"role": "user", "content": prompts.JSON_ONLY.format(instruction=instruction)}]
            out = self._call("truncation_retry", ctx.kind, follow, max_tokens=RETRY_TOKENS, reasoning=False)
            retry = parse_action(out.text, ctx, hand, out.finish_reason)
            if not retry.failed or res.failed:
                res = retry
            messages = follow
        if res.cards_missing:
            feedback = prompts.CARDS_NOT_IN_HAND.format(
                requested=list(res.requested_cards or ()), hand=list(hand), instruction=instruction)
            follow = messages + [{"role": "assistant", "content": out.text},
                                 {"role": "user", "content": feedback}]
            out = self._call("card_retry", ctx.kind, follow)
            retry = parse_action(out.text, ctx, hand, out.finish_reason)
            if not retry.failed:
                res = retry  # still missing cards: the engine rules fall back to greedy selection
        if res.failed:
            self.format_failures += 1
            self.records.append({"type": "FormatFailure", "kind": ctx.kind,
                                 "truncated": res.truncated, "excerpt": out.text[:200]})
        return res.action

    # -- scratchpad -------------------------------------------------------

    def end_turn(self, obs: Observation) -> None:
        if self.memory != "full":
            return
        lines = event_lines(self._pending, obs.player_id)
        self._pending = []
        if not lines:
            return
        prompt = scratchpad_prompt(self.notes, lines)
        try:
            out = self._call("scratchpad", "scratchpad", [{"role": "user", "content": prompt}])
        except (EndpointUnavailable, EndpointError) as exc:
            self.records.append({"type": "AgentError", "kind": "scratchpad", "error": str(exc)[:300]})
            return
        notes = out.text.strip()
        truncated = len(notes) > self.scratchpad_chars
        self.notes = notes[: self.scratchpad_chars]
        self.records.append({"type": "ScratchpadUpdated", "chars": len(self.notes),
                             "truncated": truncated, "notes": self.notes})
