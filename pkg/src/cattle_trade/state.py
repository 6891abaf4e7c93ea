"""Players, game state, scoring and trade-challenge legality."""
from __future__ import annotations

import hashlib
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .animals import STARTING_MONEY, Animal
from .config import GameConfig
from .events import SCHEMA_VERSION, Event


@dataclass
class PlayerState:
    player_id: int
    animals: Counter = field(default_factory=Counter)
    money: list[int] = field(default_factory=list)
    wealth_revealed: bool = False
    revealed_total: int | None = None
    revealed_turn: int | None = None

    @property
    def wealth(self) -> int:
        return sum(self.money)

    def add_money(self, cards: Iterable[int]) -> None:
        self.money.extend(cards)
        self.money.sort(reverse=True)

    def count(self, animal: Animal) -> int:
        return self.animals.get(animal, 0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "player_id": self.player_id,
            "animals": {a.label: n for a, n in sorted(self.animals.items(), key=lambda kv: kv[0].points) if n},
            "money": list(self.money),
            "wealth_revealed": self.wealth_revealed,
            "revealed_total": self.revealed_total,
            "revealed_turn": self.revealed_turn,
        }


@dataclass
class GameState:
    config: GameConfig
    deck: list[Animal]
    players: list[PlayerState]
    rng: random.Random
    active_player: int = 0
    turn: int = 0
    donkeys_drawn: int = 0
    consecutive_passes: int = 0
    terminal: bool = False
    end_reason: str | None = None
    log: list[Event] = field(default_factory=list)
    # money cards and animal card sitting on the table mid-interaction
    escrow: dict[int, list[int]] = field(default_factory=dict)
    card_in_auction: Animal | None = None

    def emit(self, type_: str, **data: Any) -> Event:
        ev = Event(type_, self.turn, data)
        self.log.append(ev)
        return ev

    def player(self, pid: int) -> PlayerState:
        return self.players[pid]

    def total_money(self) -> int:
        return sum(p.wealth for p in self.players) + sum(sum(c) for c in self.escrow.values())

    def animal_count(self) -> int:
        held = sum(sum(p.animals.values()) for p in self.players)
        return len(self.deck) + held + (1 if self.card_in_auction is not None else 0)

    def snapshot(self) -> dict[str, Any]:
        """Canonical, JSON-safe description of everything but the log."""
        return {
            "turn": self.turn,
            "active_player": self.active_player,
            "donkeys_drawn": self.donkeys_drawn,
            "consecutive_passes": self.consecutive_passes,
            "terminal": self.terminal,
            "end_reason": self.end_reason,
            "deck": [a.label for a in self.deck],
            "players": [p.to_dict() for p in self.players],
            "rng": hashlib.sha256(repr(self.rng.getstate()).encode()).hexdigest(),
        }

    def digest(self) -> str:
        blob = json.dumps(self.snapshot(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def score(holdings: Mapping[Animal, int] | PlayerState, k: int) -> int:
    """Sum of completed-set values times the number of completed sets."""
    animals = holdings.animals if isinstance(holdings, PlayerState) else holdings
    done = [a for a, n in animals.items() if n >= k]
    return sum(a.points for a in done) * len(done)


def completed_sets(holdings: Mapping[Animal, int], k: int) -> list[Animal]:
    return sorted((a for a, n in holdings.items() if n >= k), key=lambda a: a.points)


def new_game(config: GameConfig, agents: list[str] | None = None,
             agent_params: dict[str, Any] | None = None) -> GameState:
    config.validate()
    rng = random.Random(config.seed)
    cards = [a for a in config.animals for _ in range(config.set_size)]
    rng.shuffle(cards)
    players = [PlayerState(i, money=sorted(STARTING_MONEY, reverse=True))
               for i in range(config.num_players)]
    state = GameState(config=config, deck=[], players=players, rng=rng)
    state.emit(
        "GameStarted",
        schema_version=SCHEMA_VERSION,
        config=config.to_dict(),
        seed=config.seed,
        agents=list(agents) if agents is not None else [f"player{i}" for i in range(config.num_players)],
        agent_params=agent_params or {},
    )
    dealt = config.starting_animals * config.num_players
    for i, animal in enumerate(cards[:dealt]):
        pid = i % config.num_players
        players[pid].animals[animal] += 1
        state.emit("CardDrawn", player=pid, animal=animal.label, dealt=True,
                   deck_remaining=config.deck_total - i - 1)
    state.deck = cards[dealt:]
    for p in players:
        for a in completed_sets(p.animals, config.set_size):
            state.emit("QuartetCompleted", player=p.player_id, animal=a.label)
    return state


def legal_tc_targets(state: GameState, player: int) -> list[tuple[int, Animal]]:
    """(opponent, animal) pairs a trade challenge may be opened on, in seat then value order."""
    k = state.config.set_size
    me = state.players[player]
    out = []
    for opp in state.players:
        if opp.player_id == player:
            continue
        for animal in state.config.animals:
            mine, theirs = me.count(animal), opp.count(animal)
            if 1 <= mine < k and 1 <= theirs < k:
                out.append((opp.player_id, animal))
    return out


def any_legal_tc(state: GameState) -> bool:
    return any(legal_tc_targets(state, p.player_id) for p in state.players)
