"""No-change settlement: pick money cards covering a target with minimum overpay."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence


class InsufficientFunds(Exception):
    def __init__(self, available: int, target: int) -> None:
        super().__init__(f"hand totals {available} coins, cannot cover {target}")
        self.available = available
        self.target = target


@dataclass(frozen=True)
class Settlement:
    cards_paid: tuple[int, ...]
    total_paid: int
    overpay: int


def settle(hand: Iterable[int], target: int) -> Settlement:
    """Choose the cards to pay ``target`` coins out of ``hand``.

    The paid total is the smallest achievable sum >= target. Among subsets
    reaching that sum the one with the fewest cards wins, and remaining ties
    prefer larger denominations. ``cards_paid`` is sorted descending.
    """
    if target < 0:
        raise ValueError(f"target must be non-negative, got {target}")
    cards = [c for c in hand if c > 0]
    available = sum(cards)
    if available < target:
        raise InsufficientFunds(available, target)
    if target == 0:
        return Settlement((), 0, 0)

    counts = Counter(cards)
    denoms = sorted(counts)  # ascending; larger denominations compared first in the key
    # best[s] = (card count, (-n_largest, ..., -n_smallest)) over denominations seen so far
    best: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}
    for d in denoms:
        nxt: dict[int, tuple[int, tuple[int, ...]]] = {}
        for s, (n_cards, tail) in best.items():
            for n in range(counts[d] + 1):
                key = (n_cards + n, (-n,) + tail)
                t = s + n * d
                cur = nxt.get(t)
                if cur is None or key < cur:
                    nxt[t] = key
        best = nxt

    total = min(s for s in best if s >= target)
    _, neg_counts = best[total]
    paid: list[int] = []
    for d, neg in zip(reversed(denoms), neg_counts):
        paid.extend([d] * -neg)
    return Settlement(tuple(paid), total, total - target)


def remove_cards(hand: Sequence[int], cards: Iterable[int]) -> list[int]:
    """Return ``hand`` minus the multiset ``cards``; ValueError if not a sub-multiset."""
    remaining = Counter(hand)
    for c in cards:
        if remaining[c] <= 0:
            raise ValueError(f"card {c} not in hand {sorted(hand, reverse=True)}")
        remaining[c] -= 1
    return sorted(remaining.elements(), reverse=True)


def is_submultiset(cards: Iterable[int], hand: Iterable[int]) -> bool:
    need = Counter(cards)
    have = Counter(hand)
    return all(have[c] >= n for c, n in need.items())


def greedy_offer(hand: Sequence[int], requested: Iterable[int]) -> tuple[int, ...]:
    """Fallback card choice when a requested offer is not in hand.

    Largest cards first without exceeding the requested total, then the
    smallest remaining positive card if still short; zero cards are added up
    to the number of zeros requested.
    """
    requested = list(requested)
    target = sum(c for c in requested if c > 0)
    positives = sorted((c for c in hand if c > 0), reverse=True)
    chosen: list[int] = []
    running = 0
    rest: list[int] = []
    for c in positives:
        if running + c <= target:
            chosen.append(c)
            running += c
        else:
            rest.append(c)
    if running < target and rest:
        chosen.append(min(rest))
    zeros_wanted = sum(1 for c in requested if c == 0)
    zeros_held = sum(1 for c in hand if c == 0)
    chosen.extend([0] * min(zeros_wanted, zeros_held))
    return tuple(sorted(chosen, reverse=True))
