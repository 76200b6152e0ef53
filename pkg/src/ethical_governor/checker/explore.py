"""Exhaustive exploration of every coin-flip branch, and property checking over
the resulting traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Iterator, NamedTuple, Optional

from ..core import ActionId
from ..dsl import GovernorSpec
from ..gridworld import GridConfig, WorldState, percepts
from ..properties import Formula
from ..terms import Term
from .scenario import Scenario
from .temporal import ENGINE, ROBOT, agent_roles, holds, resolve_agents


class Position(NamedTuple):
    state: WorldState
    percepts: frozenset[Term]
    action: Optional[ActionId]  # None at the terminal position
    selected: frozenset[ActionId]
    beliefs: frozenset[Term]

    def view(self) -> dict[str, frozenset[Term]]:
        return {ROBOT: self.percepts, ENGINE: self.beliefs}


@dataclass(frozen=True)
class Trace:
    positions: tuple[Position, ...]
    weight: Fraction = Fraction(1)

    @property
    def states(self) -> tuple[WorldState, ...]:
        return tuple(p.state for p in self.positions)

    def views(self) -> list[dict[str, frozenset[Term]]]:
        return [p.view() for p in self.positions]

    def __len__(self) -> int:
        return len(self.positions)


@dataclass
class VerificationReport:
    property: Formula
    holds: bool
    counterexample: Any = None  # a Trace, or an assignment for isolated checks
    checked: int = 0
    source: str = ""
    stats: dict[str, Any] = field(default_factory=dict)


def position(scenario: Scenario, state: WorldState) -> Position:
    seen = percepts(state, scenario.cfg)
    if scenario.is_terminal(state):
        return Position(state, seen, None, frozenset(), frozenset())
    decision = scenario.decide(state)
    return Position(state, seen, decision.action, decision.engine.selected, decision.engine.beliefs)


def iter_traces(scenario: Scenario) -> Iterator[Trace]:
    """Depth-first enumeration of maximal traces, successors in coin order."""
    root = scenario.initial
    stack: list[tuple[list[Position], Fraction, WorldState]] = [([], Fraction(1), root)]
    while stack:
        prefix, weight, state = stack.pop()
        pos = position(scenario, state)
        path = prefix + [pos]
        if pos.action is None:
            yield Trace(tuple(path), weight)
            continue
        for w, nxt in reversed(scenario.successors(state)):
            stack.append((path, weight * w, nxt))


def explore(cfg: GridConfig, gov: GovernorSpec, scenario: Scenario | None = None) -> list[Trace]:
    """Every maximal trace of the governed scenario, each with its probability weight."""
    return list(iter_traces(scenario or Scenario(cfg, gov)))


def check_property(
    formula: Formula,
    traces: Iterable[Trace],
    gov: GovernorSpec,
    source: str = "",
) -> VerificationReport:
    """The formula holds iff it holds at position 0 of every trace; the first
    falsifying trace is kept as counterexample."""
    names = agent_roles(gov)
    resolve_agents(formula, names)
    checked = 0
    for trace in traces:
        checked += 1
        if not holds(formula, trace.views(), names):
            return VerificationReport(formula, False, trace, checked, source)
    return VerificationReport(formula, True, None, checked, source)
