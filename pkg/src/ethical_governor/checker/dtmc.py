"""Exact discrete-time Markov chains built from a governed scenario."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..dsl import GovernorSpec
from ..gridworld import GridConfig, WorldState
from .explore import Trace
from .scenario import Scenario


class UndefinedLabel(KeyError):
    def __init__(self, label: str, known) -> None:
        super().__init__(label)
        self.label = label
        self.known = sorted(known)

    def __str__(self) -> str:
        return f"undefined label {self.label!r}; available labels: {', '.join(self.known)}"


@dataclass
class Dtmc:
    """State 0 is initial. ``transitions[i]`` lists ``(probability, successor)``;
    terminal states carry the single self-loop ``[(1, i)]``."""

    transitions: list[list[tuple[Fraction, int]]]
    labels: dict[str, frozenset[int]]
    states: Optional[list[WorldState]] = None
    terminal: frozenset[int] = field(default=frozenset())

    def __post_init__(self) -> None:
        if not self.terminal:
            self.terminal = frozenset(
                i for i, out in enumerate(self.transitions) if out == [(Fraction(1), i)]
            )

    @property
    def size(self) -> int:
        return len(self.transitions)

    def transition_count(self) -> int:
        return sum(len(out) for out in self.transitions)

    def check(self) -> None:
        """Raise ``ValueError`` unless every row sums to exactly one and the
        graph is acyclic apart from terminal self-loops."""
        for i, out in enumerate(self.transitions):
            total = sum((p for p, _ in out), Fraction(0))
            if total != 1:
                raise ValueError(f"state {i}: outgoing probability {total} != 1")
            if any(p <= 0 for p, _ in out):
                raise ValueError(f"state {i}: non-positive transition probability")
        _topological_order(self)


def _topological_order(m: Dtmc) -> list[int]:
    indegree = [0] * m.size
    for i, out in enumerate(m.transitions):
        for _, j in out:
            if j != i:
                indegree[j] += 1
            elif i not in m.terminal:
                raise ValueError(f"state {i}: self-loop on a non-terminal state")
    queue = deque(i for i in range(m.size) if indegree[i] == 0)
    order = []
    while queue:
        i = queue.popleft()
        order.append(i)
        for _, j in m.transitions[i]:
            if j != i:
                indegree[j] -= 1
                if indegree[j] == 0:
                    queue.append(j)
    if len(order) != m.size:
        raise ValueError("transition graph has a cycle")
    return order


def build_dtmc(cfg: GridConfig, gov: GovernorSpec, scenario: Scenario | None = None) -> Dtmc:
    """Breadth-first state numbering from the initial state; successors in coin order."""
    scenario = scenario or Scenario(cfg, gov)
    index: dict[WorldState, int] = {scenario.initial: 0}
    states = [scenario.initial]
    transitions: list[list[tuple[Fraction, int]]] = []
    terminal = set()
    i = 0
    while i < len(states):
        state = states[i]
        if scenario.is_terminal(state):
            transitions.append([(Fraction(1), i)])
            terminal.add(i)
        else:
            row = []
            for p, nxt in scenario.successors(state):
                j = index.get(nxt)
                if j is None:
                    j = index[nxt] = len(states)
                    states.append(nxt)
                row.append((p, j))
            transitions.append(row)
        i += 1
    labels = {
        name: frozenset(k for k, s in enumerate(states) if pred(s))
        for name, pred in scenario.labels.items()
    }
    return Dtmc(transitions, labels, states, frozenset(terminal))


def reachability_probability(m: Dtmc, label: str) -> Fraction:
    """Exact probability of eventually visiting a ``label`` state from state 0."""
    if label not in m.labels:
        raise UndefinedLabel(label, m.labels)
    target = m.labels[label]
    value = [Fraction(0)] * m.size
    for i in reversed(_topological_order(m)):
        if i in target:
            value[i] = Fraction(1)
        elif i not in m.terminal:
            value[i] = sum((p * value[j] for p, j in m.transitions[i]), Fraction(0))
    return value[0]


def trace_weight_probability(traces: list[Trace], predicate) -> Fraction:
    """Total weight of the traces with some state satisfying ``predicate``."""
    return sum((t.weight for t in traces if any(predicate(s) for s in t.states)), Fraction(0))
