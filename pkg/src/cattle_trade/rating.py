"""TrueSkill ratings for free-for-all games (every team is a single player).

The update runs expectation propagation over the chain of pairwise
performance differences between adjacently ranked players and iterates to a
fixed point, so it does not depend on the message schedule.
"""
from __future__ import annotations

import json
import math
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

LEDGER_VERSION = 1

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class Rating:
    mu: float
    sigma: float

    @property
    def conservative(self) -> float:
        return self.mu - 3.0 * self.sigma

    def to_dict(self) -> dict[str, float]:
        return {"mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class RatingConfig:
    mu0: float = 25.0
    sigma0: float = 25.0 / 3.0
    beta: float = 25.0 / 6.0
    tau_d: float = 25.0 / 300.0
    draw_probability: float = 0.0
    tolerance: float = 1e-12
    max_iterations: int = 1000

    def initial(self) -> Rating:
        return Rating(self.mu0, self.sigma0)

    def draw_margin(self) -> float:
        if self.draw_probability <= 0:
            return 0.0
        return statistics.NormalDist().inv_cdf((self.draw_probability + 1) / 2) * _SQRT2 * self.beta


# -- truncated Gaussian corrections ---------------------------------------

def pdf(x: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def _mills(z: float) -> float:
    """(1 - cdf(z)) / pdf(z) for large positive z, by continued fraction."""
    acc = z
    for k in range(60, 0, -1):
        acc = z + k / acc
    return 1.0 / acc


def v_win(t: float, eps: float) -> float:
    x = t - eps
    if x < -30.0:
        # cdf underflows long before the ratio does
        return 1.0 / _mills(-x)
    return pdf(x) / cdf(x)


def w_win(t: float, eps: float) -> float:
    v = v_win(t, eps)
    return v * (v + t - eps)


def v_draw(t: float, eps: float) -> float:
    a = abs(t)
    lo, hi = -eps - a, eps - a
    denom = cdf(hi) - cdf(lo)
    if denom <= 0.0:
        # both tails far out on the same side: the truncated mean sits at the near edge
        v = -hi if hi < 0 else 0.0
        return v if t >= 0 else -v
    v = (pdf(lo) - pdf(hi)) / denom
    return v if t >= 0 else -v


def w_draw(t: float, eps: float) -> float:
    a = abs(t)
    lo, hi = -eps - a, eps - a
    denom = cdf(hi) - cdf(lo)
    if denom <= 0.0:
        return 1.0
    v = v_draw(a, eps)
    return v * v + (hi * pdf(hi) - lo * pdf(lo)) / denom


# -- EP in natural parameters (precision, precision-adjusted mean) --------

@dataclass
class _G:
    pi: float = 0.0
    tau: float = 0.0

    @classmethod
    def moments(cls, mu: float, var: float) -> "_G":
        return cls(1.0 / var, mu / var)

    @property
    def mu(self) -> float:
        return self.tau / self.pi

    @property
    def var(self) -> float:
        return 1.0 / self.pi

    def __mul__(self, o: "_G") -> "_G":
        return _G(self.pi + o.pi, self.tau + o.tau)

    def __truediv__(self, o: "_G") -> "_G":
        return _G(self.pi - o.pi, self.tau - o.tau)


def _ep(priors: Sequence[_G], draws: Sequence[bool], beta2: float, eps: float,
        tol: float, max_iter: int) -> list[_G]:
    """Messages from the difference factors to each performance variable."""
    n = len(priors)
    # performance marginals before any evidence
    base = [_G.moments(p.mu, p.var + beta2) for p in priors]
    up = [_G() for _ in range(n - 1)]  # difference factor j -> p_j
    down = [_G() for _ in range(n - 1)]  # difference factor j -> p_{j+1}
    trunc = [_G() for _ in range(n - 1)]

    def marginal(i: int) -> _G:
        g = base[i]
        if i < n - 1:
            g = g * up[i]
        if i > 0:
            g = g * down[i - 1]
        return g

    def step(j: int) -> float:
        a = marginal(j) / up[j]
        b = marginal(j + 1) / down[j]
        cav_mu, cav_var = a.mu - b.mu, a.var + b.var
        s = math.sqrt(cav_var)
        t, e = cav_mu / s, eps / s
        if draws[j]:
            v, w = v_draw(t, e), w_draw(t, e)
        else:
            v, w = v_win(t, e), w_win(t, e)
        new = _G.moments(cav_mu + s * v, cav_var * (1.0 - w))
        msg = new / _G.moments(cav_mu, cav_var)
        delta = max(abs(msg.pi - trunc[j].pi), abs(msg.tau - trunc[j].tau))
        trunc[j] = msg
        # p_j = p_{j+1} + d_j and p_{j+1} = p_j - d_j
        up[j] = _G.moments(b.mu + msg.mu, b.var + msg.var) if msg.pi > 0 else _G()
        a = marginal(j) / up[j]
        down[j] = _G.moments(a.mu - msg.mu, a.var + msg.var) if msg.pi > 0 else _G()
        return delta

    for _ in range(max_iter):
        delta = 0.0
        for j in range(n - 1):
            delta = max(delta, step(j))
        for j in range(n - 2, -1, -1):
            delta = max(delta, step(j))
        if delta <= tol:
            break
    out = []
    for i in range(n):
        g = _G()
        if i < n - 1:
            g = g * up[i]
        if i > 0:
            g = g * down[i - 1]
        out.append(g)
    return out


def rate(ratings: Sequence[Rating], ranks: Sequence[int],
         config: RatingConfig = RatingConfig()) -> list[Rating]:
    """Posterior ratings for one game; lower rank is better, equal ranks draw."""
    n = len(ratings)
    if n != len(ranks):
        raise ValueError("ratings and ranks differ in length")
    if n < 2:
        return list(ratings)
    order = sorted(range(n), key=lambda i: (ranks[i], i))
    draws = [ranks[order[j]] == ranks[order[j + 1]] for j in range(n - 1)]
    if any(draws) and config.draw_probability <= 0:
        raise ValueError("tied ranks need a positive draw_probability")
    tau2 = config.tau_d ** 2
    priors = [_G.moments(ratings[i].mu, ratings[i].sigma ** 2 + tau2) for i in order]
    msgs = _ep(priors, draws, config.beta ** 2, config.draw_margin(),
               config.tolerance, config.max_iterations)
    result: list[Rating | None] = [None] * n
    for k, i in enumerate(order):
        like = msgs[k]
        post = priors[k]
        if like.pi > 0:
            post = post * _G.moments(like.mu, like.var + config.beta ** 2)
        result[i] = Rating(post.mu, math.sqrt(post.var))
    return result  # type: ignore[return-value]


def update_ratings(ratings: Mapping[str, Rating], outcome: Mapping[str, int] | Sequence[str],
                   config: RatingConfig = RatingConfig()) -> dict[str, Rating]:
    """Apply one game. ``outcome`` maps agent to rank (1 = winner) or lists
    agents from first to last. Agents not seen before start at the prior."""
    if isinstance(outcome, Mapping):
        names = list(outcome)
        ranks = [outcome[n] for n in names]
    else:
        names = list(outcome)
        ranks = list(range(1, len(names) + 1))
    if len(set(names)) != len(names):
        raise ValueError("an agent appears twice in one outcome")
    new = dict(ratings)
    before = [ratings.get(n, config.initial()) for n in names]
    for n, r in zip(names, rate(before, ranks, config)):
        new[n] = r
    return new


def rate_games(games: Iterable[Mapping[str, int] | Sequence[str]],
               config: RatingConfig = RatingConfig(),
               ratings: Mapping[str, Rating] | None = None) -> dict[str, Rating]:
    out = dict(ratings or {})
    for g in games:
        out = update_ratings(out, g, config)
    return out


# -- leaderboard ----------------------------------------------------------

@dataclass
class AgentRecord:
    games: int = 0
    wins: int = 0
    scores: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class LeaderboardRow:
    name: str
    mu: float
    sigma: float
    conservative: float
    games: int
    win_rate: float | None
    median_score: float | None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def leaderboard(ratings: Mapping[str, Rating],
                records: Mapping[str, AgentRecord] | None = None) -> list[LeaderboardRow]:
    records = records or {}
    rows = []
    for name, r in ratings.items():
        rec = records.get(name, AgentRecord())
        rows.append(LeaderboardRow(
            name=name, mu=r.mu, sigma=r.sigma, conservative=r.conservative, games=rec.games,
            win_rate=rec.wins / rec.games if rec.games else None,
            median_score=statistics.median(rec.scores) if rec.scores else None,
        ))
    rows.sort(key=lambda row: (-row.mu, row.sigma, row.name))
    return rows


# -- ledger ---------------------------------------------------------------

class RatingsLedger:
    """Append-only JSONL of per-game updates; the final ratings can be rebuilt
    from the file alone."""

    def __init__(self, path: str | Path, config: RatingConfig = RatingConfig()) -> None:
        self.path = Path(path)
        self.config = config

    def append(self, game_id: str, outcome: Mapping[str, int],
               before: Mapping[str, Rating], after: Mapping[str, Rating]) -> None:
        rec = {
            "version": LEDGER_VERSION,
            "game_id": game_id,
            "ranks": dict(outcome),
            "config": asdict(self.config),
            "before": {n: before.get(n, self.config.initial()).to_dict() for n in outcome},
            "after": {n: after[n].to_dict() for n in outcome},
        }
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def records(self) -> list[dict[str, Any]]:
        if not self.path.exists():
            return []
        out = []
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec.get("version") != LEDGER_VERSION:
                raise ValueError(f"unsupported ledger version {rec.get('version')!r}")
            out.append(rec)
        return out

    def ratings(self) -> dict[str, Rating]:
        """Latest stored posterior per agent."""
        out: dict[str, Rating] = {}
        for rec in self.records():
            for n, r in rec["after"].items():
                out[n] = Rating(r["mu"], r["sigma"])
        return out

    def recompute(self) -> dict[str, Rating]:
        """Re-run every update from the stored ranks."""
        return rate_games((rec["ranks"] for rec in self.records()), self.config)
