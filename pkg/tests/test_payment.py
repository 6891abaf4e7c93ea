import itertools
import random

import pytest
from hypothesis import given, strategies as st

from cattle_trade import InsufficientFunds, settle
from cattle_trade.payment import greedy_offer, is_submultiset, remove_cards

DENOMS = (0, 10, 50, 100, 200, 500)


def brute(hand, target):
    """(minimal sum >= target, fewest cards at that sum) by enumerating index subsets."""
    best = None
    for r in range(len(hand) + 1):
        for combo in itertools.combinations(hand, r):
            s = sum(combo)
            if s >= target and (best is None or (s, r) < best):
                best = (s, r)
    return best


@pytest.mark.parametrize("hand,target,paid,overpay", [
    ((100, 50, 10, 10, 0, 0), 60, (50, 10), 0),
    ((100,), 60, (100,), 40),
    ((100, 50, 10), 0, (), 0),
    ((10, 10, 10, 50), 70, (50, 10, 10), 0),
    ((50, 50, 10, 10, 10, 10, 10), 100, (50, 50), 0),
    ((200, 100, 100), 200, (200,), 0),
])
def test_examples(hand, target, paid, overpay):
    s = settle(hand, target)
    assert s.cards_paid == paid
    assert s.overpay == overpay and s.total_paid == target + overpay


def test_larger_denominations_break_remaining_ties():
    # 60 = 50+10 = ... only one way with 2 cards; 100 = 100 or 50+50 -> fewer cards wins
    assert settle((100, 50, 50), 100).cards_paid == (100,)
    # 110 via {100,10} or {50,50,10}: fewest cards
    assert settle((100, 50, 50, 10), 110).cards_paid == (100, 10)
    # overshoot tie: target 40 with {50} or {50}: the larger single card
    assert settle((50, 100), 40).cards_paid == (50,)


def test_insufficient_funds():
    with pytest.raises(InsufficientFunds) as exc:
        settle((10, 0, 0), 20)
    assert exc.value.available == 10 and exc.value.target == 20
    with pytest.raises(ValueError):
        settle((10,), -10)


def test_random_oracle_2000():
    rng = random.Random(11)
    for _ in range(2000):
        hand = [rng.choice(DENOMS) for _ in range(rng.randint(0, 10))]
        target = rng.randrange(0, sum(hand) + 1, 10) if sum(hand) else 0
        s = settle(hand, target)
        assert (s.total_paid, len(s.cards_paid)) == brute(hand, target)
        assert is_submultiset(s.cards_paid, hand)


@given(st.lists(st.sampled_from(DENOMS), max_size=12), st.data())
def test_properties(hand, data):
    total = sum(hand)
    target = data.draw(st.integers(0, total // 10)) * 10
    s = settle(hand, target)
    assert s.total_paid >= target and s.overpay >= 0
    assert 0 not in s.cards_paid
    assert list(s.cards_paid) == sorted(s.cards_paid, reverse=True)
    assert settle(list(reversed(hand)), target) == s


def test_remove_and_submultiset():
    assert remove_cards([50, 10, 10, 0], [10, 0]) == [50, 10]
    assert is_submultiset([10, 10], [10, 50, 10])
    assert not is_submultiset([10, 10], [10, 50])
    with pytest.raises(ValueError):
        remove_cards([10], [50])


def test_greedy_offer_keeps_what_it_can():
    # requested [50, 50] with one 50 in hand: the one 50 plus the closest cover of the rest
    assert greedy_offer((50, 10, 10, 10, 10, 0, 0), (50, 50)) == (50, 10, 10, 10, 10)
    assert greedy_offer((100, 10), (50,)) == (100, 10)
    assert greedy_offer((10, 0), (500,)) == (10,)
    assert greedy_offer((50, 0, 0), (0, 0, 0)) == (0, 0)
    assert greedy_offer((50, 10), ()) == ()
