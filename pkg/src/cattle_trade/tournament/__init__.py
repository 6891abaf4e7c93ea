from .runner import Runner, RunSummary, TournamentConfig, build_agent, game_outcome, play_match
from .schedule import COMPOSITIONS, RECONSTRUCTED, Match, Schedule, generate_schedule, match_seed

__all__ = [
    "COMPOSITIONS", "Match", "RECONSTRUCTED", "RunSummary", "Runner", "Schedule", "TournamentConfig",
    "build_agent", "game_outcome", "generate_schedule", "match_seed", "play_match",
]
