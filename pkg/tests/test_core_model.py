import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from cattle_trade import Animal, ConfigError, GameConfig, legal_tc_targets, new_game, preset, score
from cattle_trade.animals import STARTING_MONEY, donkey_payout
from cattle_trade.state import completed_sets

A = Animal


def test_animal_values_and_order():
    pairs = [(a.label, a.points) for a in Animal]
    assert pairs == [("chicken", 10), ("goose", 40), ("cat", 90), ("dog", 160), ("sheep", 250),
                     ("goat", 350), ("donkey", 500), ("pig", 650), ("cow", 800), ("horse", 1000)]
    pts = [a.points for a in Animal]
    assert pts == sorted(pts) and len(set(pts)) == 10


def test_animal_parse_is_lenient_about_case():
    assert Animal.parse("Horse") is A.HORSE
    assert Animal.parse(" cow ") is A.COW
    with pytest.raises(ValueError):
        Animal.parse("unicorn")


def test_starting_hand_and_donkeys():
    assert sorted(STARTING_MONEY) == [0, 0, 10, 10, 10, 10, 50]
    assert sum(STARTING_MONEY) == 90
    assert [donkey_payout(i) for i in range(4)] == [50, 100, 200, 500]


@pytest.mark.parametrize("holding,expected", [
    ({A.DONKEY: 4, A.HORSE: 4}, 3000),
    ({A.HORSE: 4}, 1000),
    ({A.HORSE: 4, A.COW: 4}, 3600),
    ({A.HORSE: 3, A.COW: 2, A.CHICKEN: 1}, 0),
    ({}, 0),
])
def test_score_examples(holding, expected):
    assert score(holding, 4) == expected


def _brute_score(holding, k):
    done = [a for a in Animal if holding.get(a, 0) >= k]
    return sum(a.points for a in done) * len(done)


def test_score_matches_brute_force_on_random_holdings():
    rng = random.Random(7)
    for _ in range(1000):
        k = rng.choice([2, 3, 4, 5])
        h = {a: rng.randint(0, k) for a in Animal if rng.random() < 0.6}
        assert score(h, k) == _brute_score(h, k)


def test_completed_sets_sorted_by_value():
    assert completed_sets({A.HORSE: 4, A.CAT: 4, A.COW: 3}, 4) == [A.CAT, A.HORSE]


def test_new_game_standard():
    st_ = new_game(preset("standard"))
    assert len(st_.deck) == 40
    assert all(p.wealth == 90 and len(p.money) == 7 for p in st_.players)
    assert st_.turn == 0 and st_.log[0].type == "GameStarted"
    assert st_.log[0].data["config"]["seed"] == 0


def test_new_game_micro_duel_deck():
    st_ = new_game(preset("micro-duel"))
    assert len(st_.deck) == 6 and len(st_.players) == 2


def test_same_seed_same_deck_different_seed_differs():
    cfg = preset("standard", seed=123)
    assert new_game(cfg).deck == new_game(cfg).deck
    assert new_game(cfg).deck != new_game(cfg.with_seed(124)).deck


def test_starting_animals_are_dealt_and_logged():
    cfg = preset("standard", starting_animals=2, seed=5)
    st_ = new_game(cfg)
    assert len(st_.deck) == 40 - 8
    assert all(sum(p.animals.values()) == 2 for p in st_.players)
    dealt = [e for e in st_.log if e.type == "CardDrawn"]
    assert len(dealt) == 8 and all(e.data["dealt"] for e in dealt)


@pytest.mark.parametrize("bad,needle", [
    (dict(num_players=6), "num_players"),
    (dict(num_players=1), "num_players"),
    (dict(set_size=6), "set_size"),
    (dict(num_animal_types=0), "num_animal_types"),
    (dict(num_animal_types=11), "num_animal_types"),
    (dict(starting_animals=5), "starting_animals"),
    (dict(auction_mode="dutch"), "auction_mode"),
    (dict(tc_tie_limit=0), "tc_tie_limit"),
    (dict(seed=-1), "seed"),
    (dict(seed=2**64), "seed"),
])
def test_invalid_config_names_the_bound(bad, needle):
    with pytest.raises(ConfigError, match=needle):
        GameConfig(**bad).validate()


def test_config_round_trip_and_unknown_key():
    cfg = preset("quick", seed=9)
    assert GameConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ConfigError, match="unknown"):
        GameConfig.from_dict({**cfg.to_dict(), "colour": "red"})
    with pytest.raises(ConfigError, match="preset"):
        preset("nope")


def _state_with(animals):
    st_ = new_game(preset("standard"))
    for p, held in zip(st_.players, animals):
        p.animals = Counter(held)
    return st_


def test_legal_tc_targets_examples():
    st_ = _state_with([{A.HORSE: 3}, {A.HORSE: 1}, {}, {}])
    assert legal_tc_targets(st_, 0) == [(1, A.HORSE)]
    st_ = _state_with([{A.CAT: 1}, {A.DOG: 1}, {}, {A.GOOSE: 2}])
    assert legal_tc_targets(st_, 0) == []
    st_ = _state_with([{A.COW: 2}, {A.COW: 1}, {}, {A.COW: 1}])
    assert legal_tc_targets(st_, 0) == [(1, A.COW), (3, A.COW)]


def test_completed_sets_are_never_targets():
    st_ = _state_with([{A.COW: 4, A.PIG: 1}, {A.PIG: 1}, {}, {}])
    assert legal_tc_targets(st_, 0) == [(1, A.PIG)]
    assert legal_tc_targets(st_, 1) == [(0, A.PIG)]


@given(st.lists(st.integers(0, 4), min_size=4, max_size=4), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_targets_match_definition(mine, theirs):
    kinds = [A.CAT, A.DOG, A.COW, A.PIG]
    st_ = _state_with([dict(zip(kinds, mine)), dict(zip(kinds, theirs)), {}, {}])
    expected = [(1, a) for a, m, t in zip(kinds, mine, theirs) if 1 <= m < 4 and 1 <= t < 4]
    assert legal_tc_targets(st_, 0) == sorted(expected, key=lambda x: list(Animal).index(x[1]))
