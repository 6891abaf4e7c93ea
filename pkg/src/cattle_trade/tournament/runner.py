"""Runs schedules: one log per game, a manifest for resume, then ratings and reports."""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from ..agents import CodeAgentConstants, make_code_agent
from ..config import ConfigError, GameConfig, preset
from ..engine import Game, GameAborted
from ..logio import file_sha256, read_log, write_log
from ..metrics import write_reports
from ..rating import AgentRecord, RatingConfig, RatingsLedger, leaderboard, update_ratings
from .schedule import Match, Schedule, generate_schedule

log = logging.getLogger(__name__)

CODE_KINDS = ("tracker", "setrace", "economy", "random")


@dataclass
class TournamentConfig:
    format: str = "pure"
    agents: list[str] = field(default_factory=lambda: ["tracker", "setrace", "economy", "random"])
    compositions: list[str] | None = None
    matches: list[list[str]] | None = None  # custom format
    games_per_cell: int = 1
    master_seed: int = 0
    preset: str = "standard"
    game: dict[str, Any] = field(default_factory=dict)  # GameConfig overrides
    workers: int = 1
    endpoint_failure: str = "default"  # or "abort"
    endpoints: dict[str, dict[str, Any]] = field(default_factory=dict)
    llm: dict[str, Any] = field(default_factory=dict)  # LLMAgent options
    constants: dict[str, Any] = field(default_factory=dict)  # CodeAgentConstants overrides
    rating: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TournamentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown tournament keys: {sorted(extra)}")
        return cls(**d)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def game_config(self, seed: int) -> GameConfig:
        return preset(self.preset, **self.game).with_seed(seed)

    def schedule(self) -> Schedule:
        table = self.game_config(0).num_players
        agents = self.agents
        return generate_schedule(self.format, agents, self.games_per_cell, self.master_seed,
                                 table, self.compositions, self.matches)

    def rating_config(self) -> RatingConfig:
        return RatingConfig(**self.rating)


def build_agent(spec: str, seat: int, seed: int, cfg: TournamentConfig, tc_tie_limit: int):
    """``tracker``/``setrace``/``economy``/``random`` or ``llm:<endpoint name>``."""
    if spec in CODE_KINDS:
        return make_code_agent(spec, seat, seed=seed, constants=CodeAgentConstants(**cfg.constants))
    if spec.startswith("llm:"):
        from ..llm import ChatClient, EndpointConfig, LLMAgent

        name = spec[4:]
        if name not in cfg.endpoints:
            raise ConfigError(f"no endpoint named {name!r}")
        client = ChatClient(EndpointConfig.from_dict(cfg.endpoints[name]))
        return LLMAgent(client, tc_tie_limit=tc_tie_limit, on_endpoint_failure=cfg.endpoint_failure,
                        **cfg.llm)
    raise ConfigError(f"unknown agent spec {spec!r}")


def seat_seed(match_seed: int, seat: int) -> int:
    return (match_seed * 1_000_003 + seat) % (2 ** 31)


def play_match(match: Match, cfg: TournamentConfig) -> tuple[str, list]:
    """Returns (status, events)."""
    gc = cfg.game_config(match.seed)
    agents = [build_agent(s, i, seat_seed(match.seed, i), cfg, gc.tc_tie_limit)
              for i, s in enumerate(match.seats)]
    params = {str(i): a.params() for i, a in enumerate(agents)}
    game = Game(gc, agents, names=list(match.seats), agent_params=params)
    try:
        game.play()
    except GameAborted as exc:
        game.state.emit("AgentError", player=-1, kind="abort", error=str(exc)[:300])
        return "aborted", game.state.log
    finally:
        for a in agents:
            client = getattr(a, "client", None)
            if client is not None:
                client.close()
    return "completed", game.state.log


def _worker(match_d: dict[str, Any], cfg_d: dict[str, Any], log_dir: str) -> dict[str, Any]:
    match = Match.from_dict(match_d)
    cfg = TournamentConfig.from_dict(cfg_d)
    status, events = play_match(match, cfg)
    path = Path(log_dir) / f"{match.match_id}.jsonl"
    digest = write_log(path, events)
    rec: dict[str, Any] = {"match_id": match.match_id, "index": match.index, "seed": match.seed,
                           "seats": list(match.seats), "format": match.format,
                           "file": path.name, "sha256": digest, "status": status}
    if status == "completed":
        end = events[-1].data
        rec.update(scores=end["scores"], ranks=end["ranks"], reason=end["reason"], turns=end["turns"])
    return rec


def game_outcome(seats: Sequence[str], ranks: Sequence[int]) -> dict[str, int]:
    """Agent -> rank for rating; an agent seated twice keeps its better rank."""
    out: dict[str, int] = {}
    for name, r in zip(seats, ranks):
        out[name] = min(r, out.get(name, r))
    return out


@dataclass
class RunSummary:
    out_dir: Path
    completed: int
    aborted: int
    skipped: int
    leaderboard: list


class Runner:
    def __init__(self, cfg: TournamentConfig, out_dir: str | Path) -> None:
        self.cfg = cfg
        self.out = Path(out_dir)
        self.log_dir = self.out / "logs"
        self.manifest_path = self.out / "manifest.jsonl"

    # -- persistence ------------------------------------------------------

    def _write_header(self, schedule: Schedule) -> None:
        self.out.mkdir(parents=True, exist_ok=True)
        self.log_dir.mkdir(exist_ok=True)
        (self.out / "schedule.json").write_text(schedule.to_json(), encoding="utf-8")
        (self.out / "tournament.json").write_text(json.dumps(self.cfg.to_dict(), indent=1), encoding="utf-8")

    def manifest(self) -> dict[str, dict[str, Any]]:
        """Latest record per match whose log still hashes to the recorded value."""
        out: dict[str, dict[str, Any]] = {}
        if not self.manifest_path.exists():
            return out
        for line in self.manifest_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except ValueError:
                continue  # torn final line from a crash
            out[rec["match_id"]] = rec
        valid = {}
        for mid, rec in out.items():
            p = self.log_dir / rec["file"]
            if rec["status"] == "completed" and p.exists() and file_sha256(p) == rec["sha256"]:
                valid[mid] = rec
        return valid

    def _append(self, rec: dict[str, Any]) -> None:
        with self.manifest_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    # -- running ----------------------------------------------------------

    def start(self) -> RunSummary:
        if (self.out / "schedule.json").exists():
            raise ConfigError(f"{self.out} already holds a run; use resume")
        schedule = self.cfg.schedule()
        self._write_header(schedule)
        return self._execute(schedule)

    @classmethod
    def resume(cls, out_dir: str | Path, workers: int | None = None) -> RunSummary:
        out = Path(out_dir)
        cfg = TournamentConfig.from_dict(json.loads((out / "tournament.json").read_text(encoding="utf-8")))
        if workers is not None:
            cfg.workers = workers
        runner = cls(cfg, out)
        schedule = Schedule.from_json((out / "schedule.json").read_text(encoding="utf-8"))
        return runner._execute(schedule)

    def _execute(self, schedule: Schedule) -> RunSummary:
        done = self.manifest()
        pending = [m for m in schedule.matches if m.match_id not in done]
        skipped = len(schedule.matches) - len(pending)
        cfg_d = self.cfg.to_dict()
        aborted = 0
        if self.cfg.workers > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=self.cfg.workers) as pool:
                futs = [pool.submit(_worker, m.to_dict(), cfg_d, str(self.log_dir)) for m in pending]
                for fut in as_completed(futs):
                    rec = fut.result()
                    self._append(rec)
                    aborted += rec["status"] == "aborted"
        else:
            for m in pending:
                rec = _worker(m.to_dict(), cfg_d, str(self.log_dir))
                self._append(rec)
                aborted += rec["status"] == "aborted"
        board = self.finalize(schedule)
        return RunSummary(self.out, len(pending) - aborted, aborted, skipped, board)

    def finalize(self, schedule: Schedule):
        """Ratings in schedule order, leaderboard and metric reports."""
        done = self.manifest()
        rc = self.cfg.rating_config()
        ledger_path = self.out / "ratings.jsonl"
        if ledger_path.exists():
            ledger_path.unlink()
        ledger = RatingsLedger(ledger_path, rc)
        ratings: dict = {}
        records: dict[str, AgentRecord] = {}
        logs = []
        for m in schedule.matches:
            rec = done.get(m.match_id)
            if rec is None:
                continue
            outcome = game_outcome(rec["seats"], rec["ranks"])
            new = update_ratings(ratings, outcome, rc)
            ledger.append(m.match_id, outcome, ratings, new)
            ratings = new
            for name, r in outcome.items():
                ar = records.setdefault(name, AgentRecord())
                ar.games += 1
                ar.wins += r == 1
                ar.scores.append(max(s for n, s in zip(rec["seats"], rec["scores"]) if n == name))
            logs.append((m.match_id, read_log(self.log_dir / rec["file"])))
        board = leaderboard(ratings, records)
        write_leaderboard(board, self.out)
        if logs:
            write_reports(logs, self.out / "reports")
        return board


def write_leaderboard(board, out_dir: Path) -> None:
    lines = ["| Rank | Agent | mu | sigma | mu-3sigma | Games | Win rate | Median score |",
             "|---|---|---|---|---|---|---|---|"]
    for i, row in enumerate(board, start=1):
        wr = "n/a" if row.win_rate is None else f"{100 * row.win_rate:.1f}%"
        med = "n/a" if row.median_score is None else f"{row.median_score:g}"
        lines.append(f"| {i} | {row.name} | {row.mu:.2f} | {row.sigma:.2f} | {row.conservative:.2f} | "
                     f"{row.games} | {wr} | {med} |")
    (out_dir / "leaderboard.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (out_dir / "leaderboard.json").write_text(json.dumps([r.to_dict() for r in board], indent=1),
                                              encoding="utf-8")
