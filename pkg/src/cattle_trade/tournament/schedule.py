"""Match schedules: pure round-robins, mixed compositions and custom lists."""
from __future__ import annotations

import hashlib
import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Sequence

# focal agent plus three code agents; C1 and C2 are the documented pair, the
# rest are reconstructions that keep every code agent in play
COMPOSITIONS: dict[str, tuple[str, ...]] = {
    "C1": ("tracker", "economy", "setrace"),
    "C2": ("tracker", "tracker", "economy"),
    "C3": ("economy", "economy", "tracker"),
    "C4": ("setrace", "setrace", "tracker"),
    "C5": ("setrace", "setrace", "economy"),
    "C6": ("economy", "economy", "setrace"),
    "C7": ("tracker", "tracker", "setrace"),
}
RECONSTRUCTED = ("C3", "C4", "C5", "C6", "C7")


def match_seed(master_seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{master_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2 ** 31)


@dataclass(frozen=True)
class Match:
    index: int
    seats: tuple[str, ...]
    seed: int
    format: str

    @property
    def match_id(self) -> str:
        return f"game_{self.index:05d}"

    def to_dict(self) -> dict[str, Any]:
        return {"index": self.index, "seats": list(self.seats), "seed": self.seed, "format": self.format}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Match":
        return cls(int(d["index"]), tuple(d["seats"]), int(d["seed"]), d["format"])


@dataclass
class Schedule:
    format: str
    master_seed: int
    matches: list[Match] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"format": self.format, "master_seed": self.master_seed,
                           "matches": [m.to_dict() for m in self.matches]}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        d = json.loads(text)
        return cls(d["format"], d["master_seed"], [Match.from_dict(m) for m in d["matches"]])

    def seat_counts(self) -> dict[str, Counter]:
        out: dict[str, Counter] = {}
        for m in self.matches:
            for seat, a in enumerate(m.seats):
                out.setdefault(a, Counter())[seat] += 1
        return out

    def pair_counts(self) -> Counter:
        c: Counter = Counter()
        for m in self.matches:
            for a, b in itertools.combinations(sorted(set(m.seats)), 2):
                c[(a, b)] += 1
        return c


def _balanced_seating(groups: Sequence[Sequence[str]]) -> list[tuple[str, ...]]:
    """Greedy: seat each group to keep every agent's seat histogram flat."""
    counts: dict[str, Counter] = {}
    out = []
    for group in groups:
        best = None
        for perm in itertools.permutations(group):
            cost = sum(counts.get(a, Counter())[s] for s, a in enumerate(perm))
            key = (cost, perm)
            if best is None or key < best:
                best = key
        perm = best[1]
        for s, a in enumerate(perm):
            counts.setdefault(a, Counter())[s] += 1
        out.append(perm)
    return out


def generate_schedule(format: str, agents: Sequence[str], games_per_cell: int = 1,
                      master_seed: int = 0, table_size: int = 4,
                      compositions: Sequence[str] | None = None,
                      matches: Sequence[Sequence[str]] | None = None) -> Schedule:
    """``pure``: every ``table_size`` subset of ``agents``; ``mixed``: agents[0]
    is the focal agent seated with each composition; ``custom``: ``matches``
    as given."""
    if games_per_cell < 1:
        raise ValueError("games_per_cell must be at least 1")
    if format == "pure":
        if len(set(agents)) != len(agents):
            raise ValueError("pure schedules need distinct agents")
        if len(agents) < table_size:
            raise ValueError(f"need at least {table_size} agents")
        groups = [c for c in itertools.combinations(agents, table_size)] * games_per_cell
        tag = "pure"
        tags = [tag] * len(groups)
    elif format == "mixed":
        if len(agents) != 1:
            raise ValueError("mixed schedules take exactly one focal agent")
        names = list(compositions or COMPOSITIONS)
        groups, tags = [], []
        for name in names:
            comp = COMPOSITIONS[name]
            for _ in range(games_per_cell):
                groups.append((agents[0], *comp))
                tags.append(f"mixed-{name}")
    elif format == "custom":
        if not matches:
            raise ValueError("custom schedules need explicit matches")
        groups = [tuple(m) for m in matches for _ in range(games_per_cell)]
        tags = ["custom"] * len(groups)
    else:
        raise ValueError(f"unknown schedule format {format!r}")
    if format == "custom":
        seated = groups
    else:
        seated = _balanced_seating(groups)
    sched = Schedule(format, master_seed)
    for i, (seats, tag) in enumerate(zip(seated, tags)):
        sched.matches.append(Match(i, tuple(seats), match_seed(master_seed, i), tag))
    return sched
