"""Seeded Monte Carlo simulation, used to cross-check the exact results."""

from __future__ import annotations

import math
import random
from typing import NamedTuple

from ..dsl import GovernorSpec
from ..gridworld import GridConfig
from .explore import Position, Trace, position
from .scenario import Scenario


class Estimate(NamedTuple):
    hits: int
    n: int

    @property
    def mean(self) -> float:
        return self.hits / self.n

    @property
    def stderr(self) -> float:
        p = self.mean
        return math.sqrt(p * (1 - p) / self.n)


def sample_trace(scenario: Scenario, rng: random.Random) -> Trace:
    """One run; each active human draws its coin from ``rng`` in order."""
    p = float(scenario.cfg.move_probability)
    state = scenario.initial
    positions: list[Position] = []
    while True:
        pos = position(scenario, state)
        positions.append(pos)
        if pos.action is None:
            return Trace(tuple(positions))
        coin = tuple(rng.random() < p for _ in range(scenario.active_count(state)))
        state = scenario.step(state, coin)


def monte_carlo(cfg: GridConfig, gov: GovernorSpec, n: int, seed: int,
                scenario: Scenario | None = None) -> dict[str, Estimate]:
    """Fraction of ``n`` sampled runs visiting each labelled state, with its binomial standard error."""
    if n < 1:
        raise ValueError("n must be at least 1")
    scenario = scenario or Scenario(cfg, gov)
    rng = random.Random(seed)
    hits = dict.fromkeys(scenario.labels, 0)
    p = float(cfg.move_probability)
    label_cache: dict = {}

    def labels_of(state) -> frozenset[str]:
        found = label_cache.get(state)
        if found is None:
            found = label_cache[state] = frozenset(name for name, pred in scenario.labels.items() if pred(state))
        return found

    for _ in range(n):
        state = scenario.initial
        reached = set(labels_of(state))
        while not scenario.is_terminal(state):
            coin = tuple(rng.random() < p for _ in range(scenario.active_count(state)))
            state = scenario.step(state, coin)
            reached |= labels_of(state)
        for name in reached:
            hits[name] += 1
    return {name: Estimate(count, n) for name, count in hits.items()}
