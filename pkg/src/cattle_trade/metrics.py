"""Behavioural metrics folded from full (unredacted) game logs.

Every quantity is computed from events alone, so a replayed log gives the
same numbers as the live one.
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .animals import Animal
from .events import Event

MIN_INCREMENT = 10


def _value(label: str) -> int:
    return Animal.parse(label).points


def seat_names(log: Sequence[Event]) -> list[str]:
    for ev in log:
        if ev.type == "GameStarted":
            return list(ev.data["agents"])
    raise ValueError("log has no GameStarted event")


def final(log: Sequence[Event]) -> dict[str, Any]:
    for ev in reversed(log):
        if ev.type == "GameEnded":
            return ev.data
    raise ValueError("log has no GameEnded event")


# -- per game, per seat ---------------------------------------------------

@dataclass
class SeatStats:
    """Raw counts for one seat in one game; profiles are built from these."""

    agent: str
    seat: int
    score: int = 0
    rank: int = 0
    quartets: list[str] = field(default_factory=list)
    outflow: int = 0
    outflow_by_animal: dict[str, int] = field(default_factory=dict)
    tc_wins: list[tuple[int, int]] = field(default_factory=list)  # (winner offer, loser offer)
    bids: list[tuple[int, int, int]] = field(default_factory=list)  # (amount, quartet value, phase)
    self_bids: int = 0
    auctions_bid: int = 0
    auctions_overbid: int = 0
    auctioneer_decisions: int = 0
    buy_rights: int = 0
    tc_received: int = 0
    tc_accepted: int = 0
    tc_offers: int = 0
    bluffs: int = 0
    decisions: int = 0
    format_failures: int = 0
    llm_calls: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0
    truncated_calls: int = 0

    @property
    def won(self) -> bool:
        return self.rank == 1

    def efficiency(self) -> float | None:
        """Points per coin paid out; None when nothing was paid."""
        return self.score / self.outflow if self.outflow else None

    def tightness(self) -> float | None:
        if not self.tc_wins:
            return None
        return sum(l + MIN_INCREMENT for _, l in self.tc_wins) / sum(w for w, _ in self.tc_wins)


def _spend(s: SeatStats, animal: str, amount: int) -> None:
    s.outflow += amount
    s.outflow_by_animal[animal] = s.outflow_by_animal.get(animal, 0) + amount


def game_stats(log: Sequence[Event]) -> list[SeatStats]:
    names = seat_names(log)
    seats = [SeatStats(n, i) for i, n in enumerate(names)]
    end = final(log)
    for i, s in enumerate(seats):
        s.score = end["scores"][i]
        s.rank = end["ranks"][i]

    animal: str | None = None
    standing: int | None = None
    bid_in: set[int] = set()
    over_in: set[int] = set()
    last_reveal: dict[str, Any] = {}

    def close_auction() -> None:
        for p in bid_in:
            seats[p].auctions_bid += 1
        for p in over_in:
            seats[p].auctions_overbid += 1
        bid_in.clear()
        over_in.clear()

    for ev in log:
        t, d = ev.type, ev.data
        if t == "AuctionOpened":
            close_auction()
            animal, standing = d["animal"], None
        elif t == "AuctionRestarted":
            standing = None
        elif t == "AuctionRound":
            value = _value(animal) if animal else 0
            for b in d["bids"]:
                p = b["player"]
                seats[p].bids.append((b["amount"], value, d.get("phase", 0)))
                if standing == p:
                    seats[p].self_bids += 1
                bid_in.add(p)
            for p in d.get("over_wealth", []):
                over_in.add(p)
                bid_in.add(p)
        elif t == "BidStanding":
            standing = d["bidder"]
        elif t == "AuctionSold":
            seats[d["auctioneer"]].auctioneer_decisions += 1
            _spend(seats[d["payer"]], d["animal"], d["total_paid"])
        elif t == "BuyRightExercised":
            seats[d["auctioneer"]].auctioneer_decisions += 1
            seats[d["auctioneer"]].buy_rights += 1
            _spend(seats[d["payer"]], d["animal"], d["total_paid"])
        elif t == "TCInitiated":
            s = seats[d["initiator"]]
            s.tc_offers += 1
            if not any(c > 0 for c in d["offer"]):
                s.bluffs += 1
        elif t == "TCAccepted":
            _spend(seats[d["initiator"]], d["animal"], d["offer_total"])
        elif t == "TCRevealed":
            _spend(seats[d["initiator"]], d["animal"], d["initiator_total"])
            _spend(seats[d["target"]], d["animal"], d["target_total"])
            last_reveal = d
        elif t == "TCResolved":
            seats[d["target"]].tc_received += 1
            if d["accepted"]:
                seats[d["target"]].tc_accepted += 1
            elif not d.get("by_default"):
                r = last_reveal
                if d["winner"] == d["initiator"]:
                    w, l = r["initiator_total"], r["target_total"]
                else:
                    w, l = r["target_total"], r["initiator_total"]
                seats[d["winner"]].tc_wins.append((w, l))
        elif t == "QuartetCompleted":
            seats[d["player"]].quartets.append(d["animal"])
        elif t == "Decision":
            seats[d["player"]].decisions += 1
        elif t == "FormatFailure":
            seats[d["player"]].format_failures += 1
        elif t == "LLMCall":
            s = seats[d["player"]]
            s.llm_calls += 1
            s.prompt_tokens += d.get("prompt_tokens", 0)
            s.completion_tokens += d.get("completion_tokens", 0)
            if d.get("finish_reason") == "length":
                s.truncated_calls += 1
    close_auction()
    return seats


# -- single-quantity helpers (one game, one seat) -------------------------

def capital_efficiency(log: Sequence[Event], seat: int) -> float | None:
    return game_stats(log)[seat].efficiency()


def tc_tightness(log: Sequence[Event], seat: int) -> float | None:
    return game_stats(log)[seat].tightness()


def discipline_rates(log: Sequence[Event], seat: int) -> dict[str, float | None]:
    return _rates([game_stats(log)[seat]])


def phase_aggressiveness(log: Sequence[Event]) -> dict[int, dict[int, float]]:
    """seat -> donkey phase -> mean bid / quartet value."""
    out: dict[int, dict[int, float]] = {}
    for s in game_stats(log):
        by: dict[int, list[float]] = defaultdict(list)
        for amount, value, phase in s.bids:
            by[phase].append(amount / value)
        out[s.seat] = {ph: sum(v) / len(v) for ph, v in sorted(by.items())}
    return out


# -- aggregation ----------------------------------------------------------

def lower_median(xs: Sequence[float]) -> float | None:
    if not xs:
        return None
    ys = sorted(xs)
    return ys[(len(ys) - 1) // 2]


def nearest_rank(xs: Sequence[float], q: float) -> float | None:
    if not xs:
        return None
    ys = sorted(xs)
    k = max(1, math.ceil(q * len(ys)))
    return ys[k - 1]


def iqr(xs: Sequence[float]) -> float | None:
    if not xs:
        return None
    return nearest_rank(xs, 0.75) - nearest_rank(xs, 0.25)


def _pct(num: int, den: int) -> float | None:
    return 100.0 * num / den if den else None


def _rates(stats: Sequence[SeatStats]) -> dict[str, float | None]:
    bids = [b for s in stats for b in s.bids]
    return {
        "self_bid_pct": _pct(sum(s.self_bids for s in stats), len(bids)),
        "overbid_pct": _pct(sum(s.auctions_overbid for s in stats), sum(s.auctions_bid for s in stats)),
        "bid_aggressiveness": sum(a / v for a, v, _ in bids) / len(bids) if bids else None,
        "buy_right_pct": _pct(sum(s.buy_rights for s in stats), sum(s.auctioneer_decisions for s in stats)),
        "tc_accept_pct": _pct(sum(s.tc_accepted for s in stats), sum(s.tc_received for s in stats)),
        "bluff_pct": _pct(sum(s.bluffs for s in stats), sum(s.tc_offers for s in stats)),
    }


@dataclass
class AgentProfile:
    agent: str
    games: int
    wins: int
    win_rate: float
    mean_score: float
    median_score: float | None
    quartets_per_game: float
    capital_efficiency: float | None  # median over games with outflow
    capital_efficiency_iqr: float | None
    efficiency_excluded: int  # games without any outflow
    tc_tightness: float | None  # median over games with a counter win
    tc_tightness_iqr: float | None
    bid_aggressiveness: float | None
    buy_right_pct: float | None
    tc_accept_pct: float | None
    bluff_pct: float | None
    self_bid_pct: float | None
    overbid_pct: float | None
    phase_aggressiveness: dict[int, float]
    cost_per_quartet: dict[str, float | None]
    llm_calls: int
    prompt_tokens: int
    completion_tokens: int
    tokens_per_game: float
    truncation_pct: float | None
    format_failure_pct: float | None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def profile(agent: str, stats: Sequence[SeatStats]) -> AgentProfile:
    n = len(stats)
    effs = [e for e in (s.efficiency() for s in stats) if e is not None]
    taus = [t for t in (s.tightness() for s in stats) if t is not None]
    phases: dict[int, list[float]] = defaultdict(list)
    for s in stats:
        for a, v, ph in s.bids:
            phases[ph].append(a / v)
    spent: Counter = Counter()
    done: Counter = Counter()
    for s in stats:
        spent.update(s.outflow_by_animal)
        done.update(s.quartets)
    cost = {a: (spent[a] / done[a] if done[a] else None) for a in sorted(set(spent) | set(done))}
    calls = sum(s.llm_calls for s in stats)
    pt = sum(s.prompt_tokens for s in stats)
    ct = sum(s.completion_tokens for s in stats)
    wins = sum(s.won for s in stats)
    return AgentProfile(
        agent=agent, games=n, wins=wins, win_rate=wins / n if n else 0.0,
        mean_score=sum(s.score for s in stats) / n if n else 0.0,
        median_score=lower_median([s.score for s in stats]),
        quartets_per_game=sum(len(s.quartets) for s in stats) / n if n else 0.0,
        capital_efficiency=lower_median(effs), capital_efficiency_iqr=iqr(effs),
        efficiency_excluded=n - len(effs),
        tc_tightness=lower_median(taus), tc_tightness_iqr=iqr(taus),
        phase_aggressiveness={ph: sum(v) / len(v) for ph, v in sorted(phases.items())},
        cost_per_quartet=cost,
        llm_calls=calls, prompt_tokens=pt, completion_tokens=ct,
        tokens_per_game=(pt + ct) / n if n else 0.0,
        truncation_pct=_pct(sum(s.truncated_calls for s in stats), calls),
        format_failure_pct=_pct(sum(s.format_failures for s in stats),
                                sum(s.decisions for s in stats)) if calls else None,
        **_rates(stats),
    )


def collect(logs: Iterable[Sequence[Event]]) -> dict[str, list[SeatStats]]:
    by: dict[str, list[SeatStats]] = defaultdict(list)
    for log in logs:
        for s in game_stats(log):
            by[s.agent].append(s)
    return dict(by)


def profiles(logs: Iterable[Sequence[Event]]) -> dict[str, AgentProfile]:
    return {a: profile(a, st) for a, st in sorted(collect(logs).items())}


# -- reports --------------------------------------------------------------

TABLE_COLUMNS = ("Agent", "Bid Agg.", "Buy-Right", "TC-Accept", "Bluff%", "Self-Bid", "Spend Eff.", "Overbid%")


def _fmt(x: float | None, pct: bool = False) -> str:
    if x is None:
        return "n/a"
    return f"{x:.1f}%" if pct else f"{x:.2f}"


def markdown_table(profs: dict[str, AgentProfile]) -> str:
    rows = sorted(profs.values(), key=lambda p: -(p.capital_efficiency or 0.0))
    out = ["| " + " | ".join(TABLE_COLUMNS) + " |", "|" + "---|" * len(TABLE_COLUMNS)]
    for p in rows:
        cells = [p.agent, _fmt(p.bid_aggressiveness), _fmt(p.buy_right_pct, True),
                 _fmt(p.tc_accept_pct, True), _fmt(p.bluff_pct, True), _fmt(p.self_bid_pct, True),
                 _fmt(p.capital_efficiency),
                 "n/a" if p.overbid_pct is None else f"{p.overbid_pct:.2f}%"]
        out.append("| " + " | ".join(cells) + " |")
    return "\n".join(out) + "\n"


PROFILE_FIELDS = [
    "agent", "games", "wins", "win_rate", "mean_score", "median_score", "quartets_per_game",
    "capital_efficiency", "capital_efficiency_iqr", "efficiency_excluded", "tc_tightness",
    "tc_tightness_iqr", "bid_aggressiveness", "buy_right_pct", "tc_accept_pct", "bluff_pct",
    "self_bid_pct", "overbid_pct", "llm_calls", "prompt_tokens", "completion_tokens",
    "tokens_per_game", "truncation_pct", "format_failure_pct",
]


def profiles_csv(profs: dict[str, AgentProfile]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=PROFILE_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for p in profs.values():
        w.writerow(p.to_dict())
    return buf.getvalue()


def per_game_csv(logs: Iterable[tuple[str, Sequence[Event]]]) -> str:
    """One row per (game, seat) so intervals can be bootstrapped later."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["game", "seat", "agent", "score", "rank", "quartets", "outflow", "efficiency", "tightness"])
    for gid, log in logs:
        for s in game_stats(log):
            w.writerow([gid, s.seat, s.agent, s.score, s.rank, len(s.quartets), s.outflow,
                        s.efficiency(), s.tightness()])
    return buf.getvalue()


def phase_csv(profs: dict[str, AgentProfile]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["agent", "phase", "bid_aggressiveness"])
    for p in profs.values():
        for ph, v in p.phase_aggressiveness.items():
            w.writerow([p.agent, ph, v])
    return buf.getvalue()


def cost_csv(profs: dict[str, AgentProfile]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["agent", "animal", "cost_per_quartet"])
    for p in profs.values():
        for a, v in p.cost_per_quartet.items():
            w.writerow([p.agent, a, "" if v is None else v])
    return buf.getvalue()


def write_reports(logs: Sequence[tuple[str, Sequence[Event]]], out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    profs = profiles(log for _, log in logs)
    files = {
        "profiles.csv": profiles_csv(profs),
        "behaviour_table.md": markdown_table(profs),
        "per_game.csv": per_game_csv(logs),
        "phase_aggressiveness.csv": phase_csv(profs),
        "cost_per_quartet.csv": cost_csv(profs),
    }
    paths = {}
    for name, text in files.items():
        p = out / name
        p.write_text(text, encoding="utf-8")
        paths[name] = p
    return paths
