"""Finite-trace evaluation of property formulas."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..properties import Always, And, Atom, Formula, Implies, Not, Or, atoms
from ..terms import Term

ROBOT = "robot"
ENGINE = "ce"

# One belief snapshot per trace position, keyed by role.
View = Mapping[str, frozenset[Term]]


class UnknownAgent(ValueError):
    def __init__(self, agent: str, known: Sequence[str]) -> None:
        super().__init__(f"unknown agent {agent!r}; known agents: {', '.join(sorted(known))}")
        self.agent = agent


def agent_roles(gov, roles: Sequence[str] = (ROBOT, ENGINE)) -> dict[str, str]:
    """Map agent names usable in formulas to roles.

    The robot answers to its governor agent name and to ``r``; the engine to
    the governor name and to ``ce``.
    """
    names: dict[str, str] = {}
    if ROBOT in roles:
        names[gov.agent] = ROBOT
        names["r"] = ROBOT
    if ENGINE in roles:
        names[gov.name] = ENGINE
        names["ce"] = ENGINE
    return names


def resolve_agents(formula: Formula, names: Mapping[str, str]) -> None:
    """Reject formulas mentioning agents outside ``names``."""
    for atom in atoms(formula):
        if atom.agent not in names:
            raise UnknownAgent(atom.agent, list(names))


def truth_values(formula: Formula, views: Sequence[View], names: Mapping[str, str]) -> list[bool]:
    """Truth of ``formula`` at every position of a finite trace."""
    n = len(views)
    if isinstance(formula, Atom):
        role = names[formula.agent]
        return [formula.predicate in v.get(role, ()) for v in views]
    if isinstance(formula, Not):
        return [not b for b in truth_values(formula.sub, views, names)]
    if isinstance(formula, Always):
        sub = truth_values(formula.sub, views, names)
        out = [True] * n
        acc = True
        for i in range(n - 1, -1, -1):
            acc = acc and sub[i]
            out[i] = acc
        return out
    left = truth_values(formula.left, views, names)
    right = truth_values(formula.right, views, names)
    if isinstance(formula, And):
        return [a and b for a, b in zip(left, right)]
    if isinstance(formula, Or):
        return [a or b for a, b in zip(left, right)]
    if isinstance(formula, Implies):
        return [(not a) or b for a, b in zip(left, right)]
    raise TypeError(f"not a formula: {formula!r}")


def holds(formula: Formula, views: Sequence[View], names: Mapping[str, str]) -> bool:
    """Whether ``formula`` holds at the first position. An empty trace satisfies nothing."""
    if not views:
        return False
    return truth_values(formula, views, names)[0]
