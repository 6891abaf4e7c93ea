"""Cattle Trade: a multi-agent auction and hidden-offer trading benchmark."""
from .animals import Animal
from .config import ConfigError, GameConfig, preset
from .engine import Game, is_terminal, run_game
from .payment import InsufficientFunds, Settlement, settle
from .state import GameState, PlayerState, legal_tc_targets, new_game, score

__all__ = [
    "Animal", "ConfigError", "Game", "GameConfig", "GameState", "InsufficientFunds",
    "PlayerState", "Settlement", "is_terminal", "legal_tc_targets", "new_game", "preset",
    "run_game", "score", "settle",
]
__version__ = "0.1.0"
