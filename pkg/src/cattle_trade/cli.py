"""Command line entry point: ``cattle-trade <verb> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

import yaml

from .config import ConfigError
from .logio import SchemaVersionError, iter_logs, write_log
from .metrics import write_reports
from .rating import AgentRecord, RatingConfig, RatingsLedger, leaderboard, update_ratings
from .replay import replay
from .tournament.runner import Runner, TournamentConfig, game_outcome, play_match, write_leaderboard
from .tournament.schedule import Match

EXIT_MISMATCH = 1
EXIT_VERSION = 2
EXIT_USAGE = 3


def _parse_value(text: str) -> Any:
    return yaml.safe_load(text)


def apply_overrides(data: dict[str, Any], pairs: Sequence[str]) -> dict[str, Any]:
    """``a.b=value`` pairs, values parsed as YAML scalars/lists."""
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise ConfigError(f"override {pair!r} is not key=value")
        node = data
        *parents, leaf = key.split(".")
        for p in parents:
            node = node.setdefault(p, {})
        node[leaf] = _parse_value(raw)
    return data


def load_config(path: str | None, overrides: Sequence[str] = ()) -> TournamentConfig:
    data: dict[str, Any] = {}
    if path:
        loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError("config file must hold a mapping")
        data = loaded or {}
    return TournamentConfig.from_dict(apply_overrides(data, overrides))


def _logs_in(paths: Sequence[str]) -> list[Path]:
    out: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            sub = p / "logs" if (p / "logs").is_dir() else p
            out.extend(sorted(sub.glob("*.jsonl")))
        else:
            out.append(p)
    return out


# -- verbs ------------------------------------------------------------------

def cmd_new_game(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args.set)
    seats = args.agents.split(",")
    match = Match(0, tuple(seats), args.seed, "custom")
    status, events = play_match(match, cfg)
    digest = write_log(args.out, events)
    end = events[-1]
    print(f"{status}: log {args.out} sha256 {digest[:16]}")
    if end.type == "GameEnded":
        for seat, (name, score, rank) in enumerate(zip(seats, end.data["scores"], end.data["ranks"])):
            print(f"  seat {seat} {name:<12} score {score:>6}  rank {rank}")
        print(f"  ended after {end.data['turns']} turns ({end.data['reason']})")
    return 0


def _print_summary(summary) -> None:
    print(f"completed {summary.completed}, aborted {summary.aborted}, skipped {summary.skipped}")
    print((summary.out_dir / "leaderboard.md").read_text(encoding="utf-8"), end="")


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args.set)
    if args.workers is not None:
        cfg.workers = args.workers
    if args.endpoint_failure is not None:
        cfg.endpoint_failure = args.endpoint_failure
    _print_summary(Runner(cfg, args.out).start())
    return 0


def cmd_resume(args: argparse.Namespace) -> int:
    _print_summary(Runner.resume(args.out, workers=args.workers))
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    worst = 0
    for path in _logs_in(args.logs):
        try:
            res = replay(path)
        except SchemaVersionError as exc:
            print(f"{path}: version error: {exc}")
            worst = max(worst, EXIT_VERSION)
            continue
        if res.match:
            print(f"{path}: match")
        else:
            print(f"{path}: mismatch at event {res.mismatch_index}: {res.message}")
            if args.verbose:
                print(f"  expected {json.dumps(res.expected)}")
                print(f"  actual   {json.dumps(res.actual)}")
            worst = max(worst, EXIT_MISMATCH)
    return worst


def cmd_report(args: argparse.Namespace) -> int:
    logs = list(iter_logs(_logs_in(args.logs)))
    if not logs:
        print("no logs found", file=sys.stderr)
        return EXIT_USAGE
    paths = write_reports(logs, Path(args.out))
    for p in paths.values():
        print(p)
    return 0


def cmd_rate(args: argparse.Namespace) -> int:
    rc = RatingConfig(draw_probability=args.draw_probability)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ledger_path = out / "ratings.jsonl"
    if ledger_path.exists():
        ledger_path.unlink()
    ledger = RatingsLedger(ledger_path, rc)
    ratings: dict = {}
    records: dict[str, AgentRecord] = {}
    for game_id, events in iter_logs(_logs_in(args.logs)):
        end = events[-1]
        if end.type != "GameEnded":
            continue
        seats = events[0].data["agents"]
        outcome = game_outcome(seats, end.data["ranks"])
        new = update_ratings(ratings, outcome, rc)
        ledger.append(game_id, outcome, ratings, new)
        ratings = new
        for name, r in outcome.items():
            ar = records.setdefault(name, AgentRecord())
            ar.games += 1
            ar.wins += r == 1
            ar.scores.append(max(s for n, s in zip(seats, end.data["scores"]) if n == name))
    board = leaderboard(ratings, records)
    write_leaderboard(board, out)
    print((out / "leaderboard.md").read_text(encoding="utf-8"), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cattle-trade", description="Cattle Trade game engine and tournament tools.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="verb", required=True)

    def config_args(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("-c", "--config", help="YAML tournament config")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key, e.g. game.auction_mode=fast (repeatable)")

    sp = sub.add_parser("new-game", help="play one game and write its log")
    config_args(sp)
    sp.add_argument("--agents", default="tracker,setrace,economy,random",
                    help="comma separated seat specs: tracker, setrace, economy, random or llm:<endpoint>")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="game.jsonl", help="log path")
    sp.set_defaults(func=cmd_new_game)

    sp = sub.add_parser("run", help="run a tournament schedule into a fresh directory")
    config_args(sp)
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--workers", type=int, help="parallel games")
    sp.add_argument("--endpoint-failure", choices=("default", "abort"),
                    help="on an unreachable endpoint: play safe defaults or abort the game")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("resume", help="finish an interrupted run; verified games are skipped")
    sp.add_argument("out", help="run directory")
    sp.add_argument("--workers", type=int)
    sp.set_defaults(func=cmd_resume)

    sp = sub.add_parser("replay", help="re-drive logs and verify them event by event")
    sp.add_argument("logs", nargs="+", help="log files or run directories")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("report", help="behavioural metrics reports from logs")
    sp.add_argument("logs", nargs="+", help="log files or run directories")
    sp.add_argument("--out", default="reports")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("rate", help="TrueSkill ratings and leaderboard from logs, in file order")
    sp.add_argument("logs", nargs="+", help="log files or run directories")
    sp.add_argument("--out", default=".")
    sp.add_argument("--draw-probability", type=float, default=0.0)
    sp.set_defaults(func=cmd_rate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
