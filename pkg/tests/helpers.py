from __future__ import annotations

from collections import Counter
from typing import Any, Callable

from cattle_trade.actions import Bid, BuyRight, TCDefense, TurnChoice
from cattle_trade.agents import make_code_agent
from cattle_trade.agents.base import Agent
from cattle_trade.config import GameConfig, preset
from cattle_trade.engine import Game
from cattle_trade.events import Event


class Policy(Agent):
    """Test agent answering every decision through ``fn(obs, ctx)``."""

    name = "policy"

    def __init__(self, fn: Callable[[Any, Any], Any]) -> None:
        super().__init__()
        self.fn = fn
        self.asked: list = []
        self.seen: list[Event] = []

    def decide(self, obs, ctx):
        self.asked.append((obs, ctx))
        return self.fn(obs, ctx)

    def notify(self, event) -> None:
        self.seen.append(event)


def passive(obs, ctx):
    """Never bids, sells, accepts, auctions when it can."""
    if ctx.kind == "turn_choice":
        return TurnChoice("auction" if "auction" in ctx.options else "pass")
    if ctx.kind == "bid":
        return Bid(None)
    if ctx.kind == "buy_right":
        return BuyRight(False)
    if ctx.kind == "tc_defense":
        return TCDefense(True)
    raise AssertionError(f"unexpected decision {ctx.kind}")


def staged_game(agents, deck, money=None, animals=None, config: GameConfig | None = None) -> Game:
    """A game whose deck and hands are replaced after setup."""
    cfg = config or preset("standard")
    g = Game(cfg, agents, names=[f"p{i}" for i in range(cfg.num_players)])
    st = g.state
    st.deck = list(deck)
    for i, p in enumerate(st.players):
        if money is not None and money[i] is not None:
            p.money = sorted(money[i], reverse=True)
        if animals is not None and animals[i]:
            p.animals = Counter(animals[i])
    return g


def code_game(seed: int, kinds=("tracker", "setrace", "economy", "random"), config=None) -> Game:
    cfg = (config or preset("standard")).with_seed(seed)
    agents = [make_code_agent(k, i, seed=seed * 10 + i) for i, k in enumerate(kinds)]
    g = Game(cfg, agents, names=list(kinds))
    g.play()
    return g


def random_game(seed: int, config=None) -> Game:
    n = (config or preset("standard")).num_players
    return code_game(seed, ("random",) * n, config)


def types_of(events, since: int = 0) -> list[str]:
    return [e.type for e in events[since:] if e.type != "Decision"]


def build_log(names, body, scores, ranks=None, quartets=None) -> list[Event]:
    """A hand-made log: header, the given events, footer."""
    n = len(names)
    head = Event("GameStarted", 0, {
        "schema_version": 1, "config": preset("standard").to_dict(), "seed": 0,
        "agents": list(names), "agent_params": {}})
    ranks = ranks or [sorted(scores, reverse=True).index(s) + 1 for s in scores]
    end = Event("GameEnded", 99, {
        "scores": list(scores), "wealth": [0] * n, "ranks": list(ranks),
        "quartets": quartets or [[] for _ in range(n)], "reason": "no_trades_left",
        "turns": 99, "state_digest": ""})
    return [head, *body, end]


class ConservationWatch:
    """Checks animal and money conservation after every emitted event."""

    def __init__(self, game: Game) -> None:
        self.state = game.state
        self.animals = self.state.config.deck_total
        self.money = self.state.total_money()
        self.checked = 0
        self.violations: list[str] = []
        orig = self.state.emit

        def emit(type_, **data):
            ev = orig(type_, **data)
            self.check(ev)
            return ev

        self.state.emit = emit

    def check(self, ev: Event) -> None:
        st = self.state
        self.checked += 1
        if ev.type == "DonkeyPayout":
            self.money += ev.data["total"]
        if st.animal_count() != self.animals:
            self.violations.append(f"animals {st.animal_count()} at {len(st.log) - 1} ({ev.type})")
        if st.total_money() != self.money:
            self.violations.append(f"money {st.total_money()} != {self.money} at {len(st.log) - 1} ({ev.type})")
        if any(p.wealth < 0 for p in st.players):
            self.violations.append(f"negative wealth at {len(st.log) - 1}")
