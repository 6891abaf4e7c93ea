import json
import subprocess
import sys

import pytest

from cattle_trade.cli import EXIT_MISMATCH, EXIT_USAGE, EXIT_VERSION, apply_overrides, load_config, main


def test_overrides_parse_yaml_values(tmp_path):
    data = apply_overrides({}, ["game.auction_mode=fast", "games_per_cell=3", "agents=[tracker, economy]"])
    assert data == {"game": {"auction_mode": "fast"}, "games_per_cell": 3, "agents": ["tracker", "economy"]}
    cfg_file = tmp_path / "t.yaml"
    cfg_file.write_text("format: pure\nmaster_seed: 5\ngame:\n  max_turns: 300\n")
    cfg = load_config(str(cfg_file), ["master_seed=6"])
    assert cfg.master_seed == 6 and cfg.game == {"max_turns": 300}


def test_new_game_then_replay(tmp_path, capsys):
    log = tmp_path / "g.jsonl"
    assert main(["new-game", "--seed", "3", "--out", str(log)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("completed: log") and "seat 0 tracker" in out
    assert main(["replay", str(log)]) == 0
    assert "match" in capsys.readouterr().out


def test_replay_exit_codes(tmp_path, capsys):
    log = tmp_path / "g.jsonl"
    main(["new-game", "--seed", "4", "--out", str(log), "--set", "game.auction_mode=fast"])
    lines = log.read_text().splitlines()
    recs = [json.loads(x) for x in lines]
    i = next(k for k, r in enumerate(recs) if r["type"] == "AuctionRound" and r["bids"])
    recs[i]["bids"][0]["amount"] += 10
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join(json.dumps(r) for r in recs) + "\n")
    assert main(["replay", str(bad)]) == EXIT_MISMATCH
    assert f"mismatch at event {recs[i]['seq']}" in capsys.readouterr().out

    recs = [json.loads(x) for x in lines]
    recs[0]["schema_version"] = 0
    old = tmp_path / "old.jsonl"
    old.write_text("\n".join(json.dumps(r) for r in recs) + "\n")
    assert main(["replay", str(old), str(log)]) == EXIT_VERSION


def test_usage_errors(tmp_path, capsys):
    assert main(["run", "--out", str(tmp_path / "r"), "--set", "bogus=1"]) == EXIT_USAGE
    assert main(["new-game", "--agents", "tracker,oracle,economy,random", "--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert main(["replay", str(tmp_path / "missing.jsonl")]) == EXIT_USAGE
    assert main(["report", str(tmp_path), "--out", str(tmp_path / "rep")]) == EXIT_USAGE
    with pytest.raises(SystemExit):
        main(["fly"])


def test_run_resume_report_rate(tmp_path, capsys):
    out = tmp_path / "run"
    args = ["run", "--out", str(out), "--set", "format=custom", "--set", "games_per_cell=4",
            "--set", "matches=[[tracker, setrace, economy, random]]"]
    assert main(args) == 0
    text = capsys.readouterr().out
    assert "completed 4, aborted 0, skipped 0" in text and "| Rank | Agent |" in text
    assert main(["resume", str(out)]) == 0
    assert "completed 0, aborted 0, skipped 4" in capsys.readouterr().out
    assert main(["replay", str(out)]) == 0
    assert capsys.readouterr().out.count(": match") == 4

    assert main(["report", str(out), "--out", str(tmp_path / "rep")]) == 0
    assert (tmp_path / "rep" / "profiles.csv").exists()
    assert main(["rate", str(out), "--out", str(tmp_path / "rate")]) == 0
    # rating the same logs again from the CLI agrees with the run's own ledger
    assert (tmp_path / "rate" / "leaderboard.json").read_text() == (out / "leaderboard.json").read_text()


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "cattle_trade.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for verb in ("new-game", "run", "resume", "replay", "report", "rate"):
        assert verb in res.stdout
