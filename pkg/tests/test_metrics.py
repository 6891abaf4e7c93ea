import csv

import pytest

from cattle_trade.events import Event
from cattle_trade.logio import write_log
from cattle_trade.metrics import (
    AgentProfile, game_stats, iqr, lower_median, markdown_table, nearest_rank, profiles, write_reports,
)
from cattle_trade.replay import replay
from golden_logs import GOLDEN, E, bid_round, check
from helpers import build_log, code_game, random_game


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_log(name):
    log, expected = GOLDEN[name]()
    assert check(log, expected) == []


def test_outflow_counts_every_payment_route():
    log, _ = GOLDEN["efficiency"]()
    s = game_stats(log)
    assert s[0].outflow == 220
    assert s[0].outflow_by_animal == {"cow": 60, "dog": 100, "horse": 60}
    assert s[2].outflow == 0 and s[2].auctions_bid == 1


def test_cost_per_quartet():
    log, _ = GOLDEN["efficiency"]()
    log[-1].data["quartets"] = [["cow"], [], [], []]
    log.insert(-1, Event("QuartetCompleted", 5, {"player": 0, "animal": "cow"}))
    prof = profiles([log])["a"]
    assert prof.cost_per_quartet == {"cow": 60.0, "dog": None, "horse": None}
    assert prof.quartets_per_game == 1


def test_overbid_rate_counts_auctions_not_rounds():
    body = [
        E("AuctionOpened", auctioneer=0, animal="cat", mode="canonical", priority=[1, 2, 3], phase=0),
        bid_round(0, 0, (1, 200), over=[1]),
        E("AuctionRestarted", auctioneer=0, animal="cat"),
        bid_round(0, 0, (1, 200), over=[1]),
        E("AuctionOpened", auctioneer=0, animal="dog", mode="canonical", priority=[1, 2, 3], phase=0),
        bid_round(0, 0, (1, 10)),
        E("AuctionOpened", auctioneer=0, animal="pig", mode="canonical", priority=[1, 2, 3], phase=0),
        bid_round(0, 0, (2, 10)),
    ]
    s = game_stats(build_log("abcd", body, [0, 0, 0, 0], ranks=[1, 1, 1, 1]))
    assert (s[1].auctions_bid, s[1].auctions_overbid) == (2, 1)
    assert (s[2].auctions_bid, s[2].auctions_overbid) == (1, 0)


def test_summary_conventions():
    assert lower_median([4, 1, 3, 2]) == 2
    assert lower_median([5, 1, 3]) == 3
    assert lower_median([]) is None
    xs = list(range(1, 11))
    assert nearest_rank(xs, 0.25) == 3 and nearest_rank(xs, 0.75) == 8
    assert iqr(xs) == 5 and iqr([7]) == 0 and iqr([]) is None


def test_bounds_on_random_games():
    for seed in range(40):
        for s in game_stats(random_game(seed).state.log):
            t, e = s.tightness(), s.efficiency()
            assert t is None or 0 < t <= 1
            assert e is None or e >= 0


def test_replayed_log_gives_the_same_metrics(tmp_path):
    g = code_game(12)
    p = tmp_path / "g.jsonl"
    write_log(p, g.state.log)
    res = replay(p)
    assert res.match
    assert [vars(s) for s in game_stats(res.state.log)] == [vars(s) for s in game_stats(g.state.log)]


def test_profiles_and_reports(tmp_path):
    logs = [(f"g{i}", code_game(i).state.log) for i in range(6)]
    profs = profiles(log for _, log in logs)
    assert set(profs) == {"tracker", "setrace", "economy", "random"}
    assert all(isinstance(p, AgentProfile) and p.games == 6 for p in profs.values())
    assert sum(p.wins for p in profs.values()) >= 6
    for name in ("tracker", "setrace", "economy"):
        assert profs[name].overbid_pct in (0.0, None)
        assert profs[name].llm_calls == 0 and profs[name].format_failure_pct is None
    paths = write_reports(logs, tmp_path / "reports")
    assert set(paths) == {"profiles.csv", "behaviour_table.md", "per_game.csv",
                          "phase_aggressiveness.csv", "cost_per_quartet.csv"}
    rows = list(csv.DictReader(paths["per_game.csv"].open()))
    assert len(rows) == 24
    table = markdown_table(profs).splitlines()
    assert table[0].startswith("| Agent | Bid Agg.") and len(table) == 6
