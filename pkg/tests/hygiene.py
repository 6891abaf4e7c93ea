"""Information-hygiene checks for the text a language-model player sees.

Two independent checks run at every decision of every seat:

* scan: the rendered prompt must not contain the ground-truth strings that
  would betray an opponent's money or an offer total the viewer has not
  been shown;
* non-interference: shifting every value the viewer may not see (opponent
  money cards, hidden event fields) must leave the rendered text unchanged.
"""
from __future__ import annotations

import copy
import re

from cattle_trade import preset
from cattle_trade.actions import QUIET_EVENTS, observe
from cattle_trade.agents import make_code_agent
from cattle_trade.engine import Game
from cattle_trade.events import Event, hidden_fields, view, views
from cattle_trade.llm import prompts
from cattle_trade.llm.render import decision_prompt, describe_event, event_lines, render_observation

KINDS = ("tracker", "setrace", "economy", "random")


def _shift(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value + 7
    if isinstance(value, list):
        return [_shift(v) for v in value]
    return value


def perturbed_event(ev: Event, viewer: int) -> Event:
    hidden = set(hidden_fields(ev, viewer))
    if not hidden:
        return ev
    return Event(ev.type, ev.turn, {k: (_shift(v) if k in hidden else v) for k, v in ev.data.items()})


def perturbed_state(state, viewer: int, log):
    st = copy.copy(state)
    st.players = []
    for p in state.players:
        q = copy.copy(p)
        if p.player_id != viewer:
            q.money = [c + 7 for c in p.money]
        st.players.append(q)
    st.log = log
    return st


def _hidden_values(ev: Event, viewer: int) -> list[str]:
    """Strings that would spell out the fields of ``ev`` hidden from ``viewer``."""
    hidden = hidden_fields(ev, viewer)
    public = {str(v) for k, v in ev.data.items() if k not in hidden and isinstance(v, int)}
    out = []
    for key in hidden:
        v = ev.data[key]
        if isinstance(v, bool):
            continue
        if isinstance(v, int):
            if str(v) not in public:
                out.append(str(v))
        elif isinstance(v, list) and v and all(isinstance(x, int) for x in v):
            joined = ", ".join(str(x) for x in v)
            if joined not in public:
                out.append(joined)
    return out


def source_events(state, viewer: int) -> list[Event]:
    """The unredacted events behind the viewer's recent-events window."""
    out = []
    for ev in reversed(state.log):
        if len(out) >= state.config.recent_events:
            break
        if ev.type in QUIET_EVENTS or view(ev, viewer) is None:
            continue
        out.append(ev)
    return out[::-1]


def scan(state, viewer: int, obs, observation_text: str, prompt_text: str) -> list[str]:
    """Ground-truth strings the viewer may not see, looked up where they would appear."""
    me = state.players[viewer]
    found = []

    def hit(needle: str, text: str) -> bool:
        return re.search(r"(?<![\d,])" + re.escape(needle) + r"(?![\d])", text) is not None

    # every event line is checked against the hidden fields of its own source event
    lines = [ln for ln in observation_text.splitlines() if ln.startswith("  Turn ")]
    sources = [ev for ev in source_events(state, viewer) if describe_event(view(ev, viewer), viewer)]
    if len(lines) != len(sources):
        found.append(f"{len(lines)} event lines for {len(sources)} events")
    for line, ev in zip(lines, sources):
        for needle in _hidden_values(ev, viewer):
            if hit(needle, line.split(":", 1)[1]):
                found.append(f"{ev.type} hidden value {needle!r} in {line.strip()!r}")

    # opponent money: per-opponent lines and anything the template adds
    static = set(re.findall(r"\[[\d, ]+\]", prompt_text.replace(observation_text, "")))
    opp_lines = {int(m.group(1)): m.group(0) for m in re.finditer(r"(?m)^  Player (\d+): .*$", observation_text)}
    for p in state.players:
        if p.player_id == viewer:
            continue
        revealed = p.wealth_revealed and p.revealed_total == p.wealth
        line = opp_lines.get(p.player_id, "")
        if not revealed and hit(f"{p.wealth} coins", line):
            found.append(f"player {p.player_id} wealth {p.wealth} in {line!r}")
        if p.money and sorted(p.money) != sorted(me.money):
            cards = ", ".join(str(c) for c in p.money)
            coins = ", ".join(f"{c} coins" for c in p.money)
            if coins in line or f"[{cards}]" in static - {f"[{c}]" for c in _template_lists()}:
                found.append(f"player {p.player_id} money cards {cards}")
        if not revealed and p.wealth != me.wealth and hit(f"{p.wealth} coins total", prompt_text):
            found.append(f"player {p.player_id} wealth {p.wealth} as a total")
    return found


def _template_lists() -> set[str]:
    text = " ".join(v for v in vars(prompts).values() if isinstance(v, str))
    return {m[1:-1] for m in re.findall(r"\[[\d, ]+\]", text)}


class HygieneWatch:
    def __init__(self, game: Game) -> None:
        self.game = game
        self.logs = {i: [] for i in range(game.state.config.num_players)}
        self.renders = 0
        self.violations: list[str] = []
        for seat, agent in enumerate(game.agents):
            inner = agent.decide

            def decide(obs, ctx, inner=inner, seat=seat):
                self.check(seat, obs, ctx)
                return inner(obs, ctx)
            agent.decide = decide

    def _shadow(self, viewer: int):
        log = self.logs[viewer]
        for ev in self.game.state.log[len(log):]:
            log.append(perturbed_event(ev, viewer))
        return log

    def check(self, viewer: int, obs, ctx) -> None:
        state = self.game.state
        observation = render_observation(obs, "")
        text = decision_prompt(obs, ctx, observation)
        self.renders += 1
        for problem in scan(state, viewer, obs, observation, text):
            self.violations.append(f"seat {viewer} turn {state.turn}: {problem}")
        other = observe(perturbed_state(state, viewer, self._shadow(viewer)), viewer)
        twin = decision_prompt(other, ctx, render_observation(other, ""))
        if twin != text:
            self.violations.append(f"seat {viewer} turn {state.turn}: prompt depends on hidden values")

    def check_history(self) -> None:
        """The full event feed a scratchpad would see, per seat."""
        for viewer in self.logs:
            real = event_lines(views(self.game.state.log, viewer), viewer)
            twin = event_lines(views(self._shadow(viewer), viewer), viewer)
            if real != twin:
                self.violations.append(f"seat {viewer}: event history depends on hidden values")


def scan_game(seed: int, config=None) -> HygieneWatch:
    cfg = (config or preset("standard")).with_seed(seed)
    agents = [make_code_agent(k, i, seed=seed * 10 + i) for i, k in enumerate(KINDS)]
    g = Game(cfg, agents, names=list(KINDS))
    watch = HygieneWatch(g)
    g.play()
    watch.check_history()
    return watch
