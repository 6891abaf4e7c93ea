"""Chat-completion HTTP client with retry and per-provider wire adapters."""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import httpx


class EndpointError(RuntimeError):
    """The endpoint rejected the request in a way retrying will not fix."""


class EndpointUnavailable(RuntimeError):
    """Every attempt failed with a transport or server error."""


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4o-mini"
    provider: str = "openai"  # "openai" or "anthropic"
    temperature: float = 0.1
    max_tokens: int = 4096
    reasoning_effort: str | None = "low"  # passed through untouched
    retry_delays: tuple[float, ...] = (1.0, 2.0, 4.0)
    api_key_env: str = "OPENAI_API_KEY"
    timeout: float = 120.0
    path: str | None = None
    debug_log: str | None = None

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EndpointConfig":
        d = dict(d)
        if "retry_delays" in d:
            d["retry_delays"] = tuple(d["retry_delays"])
        return cls(**d)


@dataclass
class Completion:
    text: str
    finish_reason: str | None
    prompt_tokens: int
    completion_tokens: int
    latency: float
    attempts: int


@dataclass
class Usage:
    calls: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0
    failures: int = 0

    def add(self, c: Completion) -> None:
        self.calls += 1
        self.prompt_tokens += c.prompt_tokens
        self.completion_tokens += c.completion_tokens


# -- provider adapters ----------------------------------------------------

class OpenAIAdapter:
    default_path = "/chat/completions"

    def headers(self, key: str | None) -> dict[str, str]:
        return {"Authorization": f"Bearer {key}"} if key else {}

    def body(self, cfg: EndpointConfig, system: str, messages: list[dict], max_tokens: int,
             reasoning: bool) -> dict[str, Any]:
        body = {
            "model": cfg.model,
            "messages": [{"role": "system", "content": system}, *messages],
            "temperature": cfg.temperature,
            "max_tokens": max_tokens,
        }
        if reasoning and cfg.reasoning_effort:
            body["reasoning_effort"] = cfg.reasoning_effort
        return body

    def read(self, data: dict[str, Any]) -> tuple[str, str | None, int, int]:
        choice = data["choices"][0]
        usage = data.get("usage") or {}
        return (choice["message"].get("content") or "", choice.get("finish_reason"),
                int(usage.get("prompt_tokens", 0)), int(usage.get("completion_tokens", 0)))


class AnthropicAdapter:
    default_path = "/v1/messages"

    def headers(self, key: str | None) -> dict[str, str]:
        h = {"anthropic-version": "2023-06-01"}
        if key:
            h["x-api-key"] = key
        return h

    def body(self, cfg: EndpointConfig, system: str, messages: list[dict], max_tokens: int,
             reasoning: bool) -> dict[str, Any]:
        return {
            "model": cfg.model,
            "system": system,
            "messages": messages,
            "temperature": cfg.temperature,
            "max_tokens": max_tokens,
        }

    def read(self, data: dict[str, Any]) -> tuple[str, str | None, int, int]:
        text = "".join(b.get("text", "") for b in data.get("content", []) if b.get("type") == "text")
        stop = data.get("stop_reason")
        usage = data.get("usage") or {}
        return (text, "length" if stop == "max_tokens" else stop,
                int(usage.get("input_tokens", 0)), int(usage.get("output_tokens", 0)))


ADAPTERS = {"openai": OpenAIAdapter, "anthropic": AnthropicAdapter}

_SECRET_HEADERS = ("authorization", "x-api-key", "api-key")


def redact_headers(headers: dict[str, str]) -> dict[str, str]:
    return {k: ("***" if k.lower() in _SECRET_HEADERS else v) for k, v in headers.items()}


class ChatClient:
    """Sends one chat request, retrying transport errors, 429 and 5xx with
    the configured delays. ``transport`` and ``sleep`` exist for tests."""

    def __init__(self, config: EndpointConfig, *, transport: httpx.BaseTransport | None = None,
                 sleep: Callable[[float], None] = time.sleep, api_key: str | None = None) -> None:
        if config.provider not in ADAPTERS:
            raise ValueError(f"unknown provider {config.provider!r}")
        self.config = config
        self.adapter = ADAPTERS[config.provider]()
        self.sleep = sleep
        self.api_key = api_key if api_key is not None else os.environ.get(config.api_key_env)
        self.usage = Usage()
        self._http = httpx.Client(timeout=config.timeout, transport=transport)

    @property
    def url(self) -> str:
        return self.config.base_url.rstrip("/") + (self.config.path or self.adapter.default_path)

    def close(self) -> None:
        self._http.close()

    def _mirror(self, record: dict[str, Any]) -> None:
        if self.config.debug_log:
            with Path(self.config.debug_log).open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record) + "\n")

    def complete(self, system: str, messages: list[dict[str, str]], *, max_tokens: int | None = None,
                 reasoning: bool = True) -> Completion:
        headers = {"Content-Type": "application/json", **self.adapter.headers(self.api_key)}
        body = self.adapter.body(self.config, system, messages, max_tokens or self.config.max_tokens,
                                 reasoning)
        start = time.monotonic()
        delays = list(self.config.retry_delays)
        attempt = 0
        last: str = ""
        while True:
            attempt += 1
            try:
                resp = self._http.post(self.url, headers=headers, json=body)
            except httpx.TransportError as exc:
                last = f"{type(exc).__name__}: {exc}"
            else:
                self._mirror({"url": self.url, "headers": redact_headers(headers), "request": body,
                              "status": resp.status_code, "response": resp.text[:20000]})
                if resp.status_code == 429 or resp.status_code >= 500:
                    last = f"HTTP {resp.status_code}"
                elif resp.status_code >= 400:
                    self.usage.failures += 1
                    raise EndpointError(f"HTTP {resp.status_code}: {resp.text[:500]}")
                else:
                    try:
                        text, finish, pt, ct = self.adapter.read(resp.json())
                    except (ValueError, KeyError, IndexError, TypeError) as exc:
                        last = f"bad response body: {exc!r}"
                    else:
                        out = Completion(text, finish, pt, ct, time.monotonic() - start, attempt)
                        self.usage.add(out)
                        return out
            if not delays:
                self.usage.failures += 1
                raise EndpointUnavailable(f"{attempt} attempts failed; last error: {last}")
            self.sleep(delays.pop(0))
