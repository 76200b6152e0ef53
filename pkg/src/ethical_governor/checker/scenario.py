"""A governed scenario: grid configuration plus governor, with the robot's
deterministic decisions and the stochastic successor relation."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, NamedTuple

from ..core import ActionId, EngineState, initial_state
from ..dsl import GovernorSpec
from ..gridworld import (
    ACTIVE,
    FALLEN,
    GridConfig,
    WorldState,
    choose,
    initial_world,
    is_terminal,
    world_step,
)

StatePredicate = Callable[[WorldState], bool]


class Decision(NamedTuple):
    action: ActionId
    engine: EngineState


def state_labels(cfg: GridConfig) -> dict[str, StatePredicate]:
    """Named state predicates: ``<id>_hole`` per human, ``robot_hole`` and ``at_goal``."""
    labels: dict[str, StatePredicate] = {}
    for hid, _ in cfg.humans:
        labels[f"{hid}_hole"] = lambda s, hid=hid: s.human(hid).status == FALLEN
    labels["robot_hole"] = lambda s: s.robot == cfg.hole
    labels["at_goal"] = lambda s: s.robot == cfg.goal
    return labels


def coin_combinations(m: int) -> list[tuple[bool, ...]]:
    """All flag tuples for ``m`` active humans; index order is binary counting, first human most significant."""
    return list(itertools.product((False, True), repeat=m))


def coin_probability(coin: tuple[bool, ...], p: Fraction) -> Fraction:
    k = sum(coin)
    return p**k * (1 - p) ** (len(coin) - k)


class Scenario:
    """Memoising wrapper around the grid dynamics for one config and governor."""

    def __init__(self, cfg: GridConfig, gov: GovernorSpec) -> None:
        self.cfg = cfg
        self.gov = gov
        self.labels = state_labels(cfg)
        self._engine = initial_state(gov, ())
        self._decisions: dict[WorldState, Decision] = {}
        self._successors: dict[WorldState, list[tuple[Fraction, WorldState]]] = {}
        self._steps: dict[tuple[WorldState, tuple[bool, ...]], WorldState] = {}

    @property
    def initial(self) -> WorldState:
        return initial_world(self.cfg)

    def is_terminal(self, state: WorldState) -> bool:
        return is_terminal(state, self.cfg)

    def decide(self, state: WorldState) -> Decision:
        decision = self._decisions.get(state)
        if decision is None:
            decision = Decision(*choose(state, self._engine, self.cfg))
            self._decisions[state] = decision
        return decision

    def step(self, state: WorldState, coin: tuple[bool, ...]) -> WorldState:
        key = (state, coin)
        nxt = self._steps.get(key)
        if nxt is None:
            nxt = self._steps[key] = world_step(state, self.decide(state).action, coin, self.cfg)
        return nxt

    def active_count(self, state: WorldState) -> int:
        return sum(h.status == ACTIVE for h in state.humans)

    def successors(self, state: WorldState) -> list[tuple[Fraction, WorldState]]:
        """Distinct successors of a non-terminal state with exact probabilities.

        Coin combinations leading to the same state are merged; successors are
        ordered by the index of the first combination producing them.
        """
        cached = self._successors.get(state)
        if cached is not None:
            return cached
        if self.is_terminal(state):
            raise ValueError("terminal states have no successors")
        merged: dict[WorldState, Fraction] = {}
        p = self.cfg.move_probability
        for coin in coin_combinations(self.active_count(state)):
            w = coin_probability(coin, p)
            if w == 0:
                continue
            nxt = self.step(state, coin)
            merged[nxt] = merged.get(nxt, Fraction(0)) + w
        result = [(w, s) for s, w in merged.items()]
        self._successors[state] = result
        return result
