"""Animal cards, money denominations and bank payouts."""
from __future__ import annotations

from enum import Enum


class Animal(Enum):
    CHICKEN = ("chicken", 10)
    GOOSE = ("goose", 40)
    CAT = ("cat", 90)
    DOG = ("dog", 160)
    SHEEP = ("sheep", 250)
    GOAT = ("goat", 350)
    DONKEY = ("donkey", 500)
    PIG = ("pig", 650)
    COW = ("cow", 800)
    HORSE = ("horse", 1000)

    def __init__(self, label: str, points: int) -> None:
        self.label = label
        self.points = points

    def __str__(self) -> str:
        return self.label

    @classmethod
    def parse(cls, text: str) -> "Animal":
        key = str(text).strip().lower()
        for animal in cls:
            if animal.label == key or animal.name.lower() == key:
                return animal
        raise ValueError(f"unknown animal {text!r}")


ALL_ANIMALS: tuple[Animal, ...] = tuple(Animal)

MONEY_DENOMINATIONS: tuple[int, ...] = (0, 10, 50, 100, 200, 500)
STARTING_MONEY: tuple[int, ...] = (50, 10, 10, 10, 10, 0, 0)

# nth donkey drawn pays every player one card of this value; draws past the
# end of the table repeat the last entry (only reachable with set size 5)
DONKEY_PAYOUTS: tuple[int, ...] = (50, 100, 200, 500)


def donkey_payout(index: int) -> int:
    """Payout for the ``index``-th donkey drawn (0-based)."""
    return DONKEY_PAYOUTS[min(index, len(DONKEY_PAYOUTS) - 1)]


def animals_for(num_types: int) -> tuple[Animal, ...]:
    """The ``num_types`` most valuable animals, in ascending value order."""
    if not 1 <= num_types <= len(ALL_ANIMALS):
        raise ValueError(f"num_types must be in [1, {len(ALL_ANIMALS)}]")
    return ALL_ANIMALS[len(ALL_ANIMALS) - num_types:]
