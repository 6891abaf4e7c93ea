"""Small shared helpers and the single constants record for the code agents."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Sequence

from ..actions import Observation
from ..animals import Animal
from ..payment import InsufficientFunds, settle


@dataclass(frozen=True)
class CodeAgentConstants:
    # tracker
    tracker_initial_wealth: int = 90
    tracker_increment: int = 10
    tracker_near_zero: int = 0
    tracker_coins_per_point: float = 0.2
    tracker_tc_value_share: float = 2.5
    # expected counter, as a share of the target's estimated wealth
    tracker_counter_share: float = 0.3
    tracker_unseen_offer_share: float = 1.0
    # setrace: share of wealth it will commit, by progress of the set
    setrace_cap_complete: float = 1.0
    setrace_cap_three: float = 0.5
    setrace_cap_other: float = 0.25
    # economy
    economy_cap_fraction: float = 0.4
    economy_accept_prior: float = 0.5
    economy_bluff_max_counter_prob: float = 0.35
    economy_leader_cap_factor: float = 0.5

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


DEFAULT_CONSTANTS = CodeAgentConstants()


def floor10(x: float) -> int:
    x = int(x)
    return x - x % 10


def own_sets(obs: Observation) -> list[Animal]:
    return [a for a, n in obs.animals.items() if n >= obs.set_size]


def completion_gain(obs: Observation, animal: Animal) -> int:
    """Score increase from completing ``animal`` on top of the current sets."""
    done = own_sets(obs)
    base = sum(a.points for a in done)
    return (base + animal.points) * (len(done) + 1) - base * len(done)


def max_opponent_count(obs: Observation, animal: Animal, exclude: int | None = None) -> int:
    return max((o.animals.get(animal, 0) for o in obs.opponents if o.player_id != exclude), default=0)


def pursues(obs: Observation, animal: Animal) -> bool:
    mine = obs.count(animal)
    return mine < obs.set_size and mine >= max_opponent_count(obs, animal)


def no_path(obs: Observation, animal: Animal) -> bool:
    mine = obs.count(animal)
    return mine == 0 and max_opponent_count(obs, animal) >= obs.set_size - 1


def pay_cards(hand: Sequence[int], target: int) -> tuple[int, ...]:
    """Cards covering ``target`` with least overpay, or every positive card if short."""
    try:
        return settle(hand, max(0, target)).cards_paid
    except InsufficientFunds:
        return tuple(sorted((c for c in hand if c > 0), reverse=True))


def zero_cards(hand: Sequence[int], n: int | None = None) -> tuple[int, ...]:
    zeros = [c for c in hand if c == 0]
    return tuple(zeros if n is None else zeros[:n])
