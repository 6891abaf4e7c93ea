import math
import random

import pytest

from cattle_trade.rating import (
    AgentRecord, Rating, RatingConfig, RatingsLedger, leaderboard, rate, rate_games, update_ratings,
)
from trueskill_oracle import rate_reference, two_player_quadrature

FRESH = Rating(25.0, 25 / 3)
DRAWS = RatingConfig(draw_probability=0.1)


def random_sequences(count, seed, draw_probability=0.0):
    """Random games over a small pool, each either 2 or 4 players."""
    rng = random.Random(seed)
    for _ in range(count):
        pool = [f"a{i}" for i in range(6)]
        games = []
        for _ in range(rng.randint(1, 6)):
            names = rng.sample(pool, rng.choice([2, 4]))
            if draw_probability:
                ranks = sorted(rng.randint(1, len(names)) for _ in names)
            else:
                ranks = list(range(1, len(names) + 1))
            games.append(dict(zip(names, ranks)))
        yield games


def oracle_sequence(games, draw_probability=0.0):
    ratings = {}
    for g in games:
        names = list(g)
        prior = [ratings.get(n, (25.0, 25 / 3)) for n in names]
        post = rate_reference([m for m, _ in prior], [s for _, s in prior], [g[n] for n in names],
                              draw_probability=draw_probability)
        ratings.update(zip(names, post))
    return ratings


def test_two_player_frozen_values():
    w, l = rate([FRESH, FRESH], [1, 2])
    assert w.mu == pytest.approx(29.205473176557, abs=1e-9)
    assert l.mu == pytest.approx(20.794526823442, abs=1e-9)
    assert w.sigma == l.sigma == pytest.approx(7.194816484813, abs=1e-9)


def test_two_player_matches_quadrature():
    m1, s1, m2 = two_player_quadrature()
    w, l = rate([FRESH, FRESH], [1, 2])
    assert (w.mu, w.sigma, l.mu) == pytest.approx((m1, s1, m2), abs=1e-8)


def test_two_player_with_draw_margin_frozen():
    w, l = rate([FRESH, FRESH], [1, 2], DRAWS)
    assert w.mu == pytest.approx(29.395831692992, abs=1e-9)
    assert l.mu == pytest.approx(20.604168307008, abs=1e-9)
    assert w.sigma == pytest.approx(7.171475807009, abs=1e-9)


def test_four_player_frozen_and_monotone():
    rs = rate([FRESH] * 4, [1, 2, 3, 4])
    expected = [(32.678105838033, 6.409080758527), (27.216745361049, 5.827451617362),
                (22.783254638951, 5.827451617362), (17.321894161968, 6.409080758527)]
    for r, (m, s) in zip(rs, expected):
        assert (r.mu, r.sigma) == pytest.approx((m, s), abs=1e-9)
    assert rs[0].mu > rs[1].mu > rs[2].mu > rs[3].mu


def test_draw_between_middle_players():
    rs = rate([FRESH] * 4, [1, 2, 2, 4], DRAWS)
    ref = rate_reference([25.0] * 4, [25 / 3] * 4, [1, 2, 2, 4], draw_probability=0.1)
    for r, (m, s) in zip(rs, ref):
        assert abs(r.mu - m) < 1e-6 and abs(r.sigma - s) < 1e-6


def test_random_sequences_match_reference():
    worst = 0.0
    for games in random_sequences(100, seed=7):
        got = rate_games(games)
        ref = oracle_sequence(games)
        for n, (m, s) in ref.items():
            worst = max(worst, abs(got[n].mu - m), abs(got[n].sigma - s))
    assert worst < 1e-6


def test_random_sequences_with_draws_match_reference():
    for games in random_sequences(15, seed=3, draw_probability=0.1):
        got = rate_games(games, DRAWS)
        for n, (m, s) in oracle_sequence(games, 0.1).items():
            assert abs(got[n].mu - m) < 1e-6 and abs(got[n].sigma - s) < 1e-6


def test_uneven_priors():
    a, b = Rating(30.0, 2.0), Rating(20.0, 8.0)
    ra, rb = rate([a, b], [2, 1])
    (ma, sa), (mb, sb) = rate_reference([30.0, 20.0], [2.0, 8.0], [2, 1])
    assert abs(ra.mu - ma) < 1e-9 and abs(rb.mu - mb) < 1e-9 and abs(sa - ra.sigma) < 1e-9
    assert rb.mu - 20.0 > 30.0 - ra.mu  # the uncertain upset winner moves further


def test_extreme_upset_stays_finite():
    ra, rb = rate([Rating(60.0, 0.5), Rating(-10.0, 0.5)], [2, 1])
    assert all(math.isfinite(x) for x in (ra.mu, ra.sigma, rb.mu, rb.sigma))
    assert ra.mu < 60.0 and rb.mu > -10.0


def test_degenerate_inputs():
    assert rate([FRESH], [1]) == [FRESH]
    assert rate_games([]) == {}
    with pytest.raises(ValueError, match="draw_probability"):
        rate([FRESH, FRESH], [1, 1])
    with pytest.raises(ValueError):
        rate([FRESH, FRESH], [1])
    with pytest.raises(ValueError, match="twice"):
        update_ratings({}, ["a", "a"])


def test_update_accepts_order_or_mapping():
    a = update_ratings({}, ["x", "y", "z"])
    b = update_ratings({}, {"z": 3, "x": 1, "y": 2})
    assert a == b
    c = update_ratings(a, ["y", "w"])
    assert c["x"] == a["x"] and c["w"].mu < 25.0


def test_deterministic():
    games = next(random_sequences(1, seed=11))
    assert rate_games(games) == rate_games(games)


def test_leaderboard_orders_by_mu_then_sigma_then_name():
    ratings = {"b": Rating(30, 2), "a": Rating(30, 2), "c": Rating(30, 1), "d": Rating(31, 8)}
    records = {"a": AgentRecord(4, 1, [10, 40, 20, 30]), "d": AgentRecord(3, 3, [5, 100, 50])}
    rows = leaderboard(ratings, records)
    assert [r.name for r in rows] == ["d", "c", "a", "b"]
    assert rows[0].win_rate == 1.0 and rows[0].median_score == 50
    assert rows[2].median_score == 25 and rows[2].conservative == 24
    assert rows[1].games == 0 and rows[1].win_rate is None


def test_ledger_recompute(tmp_path):
    ledger = RatingsLedger(tmp_path / "ratings.jsonl")
    ratings = {}
    for i, g in enumerate(next(random_sequences(1, seed=5))):
        new = update_ratings(ratings, g)
        ledger.append(f"g{i}", g, ratings, new)
        ratings = new
    assert ledger.ratings() == ratings
    assert ledger.recompute() == ratings
    assert ledger.records()[0]["before"] == {n: FRESH.to_dict() for n in ledger.records()[0]["ranks"]}
