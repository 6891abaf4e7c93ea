from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Any

from .animals import ALL_ANIMALS, Animal, animals_for

AUCTION_MODES = ("canonical", "fast", "legacy")


class ConfigError(ValueError):
    """Raised when a GameConfig violates one of its bounds."""


@dataclass(frozen=True)
class GameConfig:
    num_players: int = 4
    set_size: int = 4
    num_animal_types: int = 10
    # animal cards dealt to each player before the first turn
    starting_animals: int = 0
    auction_mode: str = "canonical"
    tc_tie_limit: int = 3
    seed: int = 0
    max_turns: int = 500
    max_auction_rounds: int = 400
    recent_events: int = 10

    def validate(self) -> "GameConfig":
        if not 2 <= self.num_players <= 5:
            raise ConfigError(f"num_players={self.num_players} outside [2, 5]")
        if self.set_size not in (2, 3, 4, 5):
            raise ConfigError(f"set_size={self.set_size} not in {{2, 3, 4, 5}}")
        if not 1 <= self.num_animal_types <= len(ALL_ANIMALS):
            raise ConfigError(
                f"num_animal_types={self.num_animal_types} outside [1, {len(ALL_ANIMALS)}]"
            )
        if not 0 <= self.starting_animals <= self.set_size:
            raise ConfigError(
                f"starting_animals={self.starting_animals} outside [0, set_size={self.set_size}]"
            )
        if self.starting_animals * self.num_players > self.deck_total:
            raise ConfigError(
                f"starting_animals={self.starting_animals} x {self.num_players} players "
                f"exceeds the {self.deck_total} animal cards"
            )
        if self.auction_mode not in AUCTION_MODES:
            raise ConfigError(f"auction_mode={self.auction_mode!r} not in {AUCTION_MODES}")
        if self.tc_tie_limit < 1:
            raise ConfigError(f"tc_tie_limit={self.tc_tie_limit} must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed={self.seed} is not a 64-bit unsigned integer")
        if self.max_turns < 1:
            raise ConfigError(f"max_turns={self.max_turns} must be >= 1")
        if self.max_auction_rounds < 2:
            raise ConfigError(f"max_auction_rounds={self.max_auction_rounds} must be >= 2")
        return self

    @property
    def animals(self) -> tuple[Animal, ...]:
        return animals_for(self.num_animal_types)

    @property
    def deck_total(self) -> int:
        return self.set_size * self.num_animal_types

    @property
    def initial_deck_size(self) -> int:
        return self.deck_total - self.starting_animals * self.num_players

    def with_seed(self, seed: int) -> "GameConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GameConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data).validate()


PRESETS: dict[str, GameConfig] = {
    "standard": GameConfig(),
    "micro-duel": GameConfig(num_players=2, set_size=2, num_animal_types=3),
    "duel": GameConfig(num_players=2, set_size=4, num_animal_types=5),
    "quick": GameConfig(num_players=3, set_size=3, num_animal_types=6),
    "marathon": GameConfig(num_players=5, set_size=5, num_animal_types=10, max_turns=800),
}


def preset(name: str, **overrides: Any) -> GameConfig:
    try:
        base = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(base, **overrides).validate()
