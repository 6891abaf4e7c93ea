from __future__ import annotations

from .base import Agent
from .beliefs import Beliefs
from .economy import EconomyAgent
from .heuristics import DEFAULT_CONSTANTS, CodeAgentConstants
from .random_legal import RandomLegalAgent
from .scripted import ScriptedAgent
from .setrace import SetRaceAgent
from .tracker import TrackerAgent

CODE_AGENTS = {
    "tracker": TrackerAgent,
    "setrace": SetRaceAgent,
    "economy": EconomyAgent,
}


def make_code_agent(kind: str, seat: int, seed: int = 0,
                    constants: CodeAgentConstants = DEFAULT_CONSTANTS) -> Agent:
    if kind == "random":
        return RandomLegalAgent(seed)
    try:
        return CODE_AGENTS[kind](seat, constants)
    except KeyError:
        raise ValueError(f"unknown code agent {kind!r}") from None


__all__ = [
    "Agent", "Beliefs", "CodeAgentConstants", "DEFAULT_CONSTANTS", "EconomyAgent",
    "RandomLegalAgent", "ScriptedAgent", "SetRaceAgent", "TrackerAgent", "make_code_agent",
    "CODE_AGENTS",
]
