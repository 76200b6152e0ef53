"""Environment-free verification of a governor over four abstract actions.

Every assignment of outcome subsets to the actions ``a1``..``a4`` is fed
through the engine, and the formula is evaluated on the resulting belief
snapshot. With four candidate outcomes there are (2**4)**4 = 65536
assignments.
"""

from __future__ import annotations

import itertools
from typing import Iterator, NamedTuple

from ..core import ActionId, Outcome, evaluate_outcomes, initial_state, model_applicable_actions
from ..dsl import GovernorSpec
from ..properties import Formula
from .explore import VerificationReport
from .temporal import ENGINE, agent_roles, holds, resolve_agents

ABSTRACT_ACTIONS = tuple(ActionId(f"a{i}") for i in range(1, 5))
ABSTRACT_OUTCOMES = (
    Outcome("human", "hole"),
    Outcome("robot", "hole"),
    Outcome("human", "collision"),
    Outcome("robot", "collision"),
)


class AbstractAssignment(NamedTuple):
    """Outcome subset predicted for each of ``a1``..``a4``, in action order."""

    outcomes: tuple[tuple[Outcome, ...], ...]

    def as_dict(self) -> dict[str, list[str]]:
        return {str(a): [str(o) for o in os] for a, os in zip(ABSTRACT_ACTIONS, self.outcomes)}

    def __str__(self) -> str:
        return "; ".join(f"{a} -> {{{', '.join(os)}}}" for a, os in self.as_dict().items())


def _subsets() -> list[tuple[Outcome, ...]]:
    return [
        tuple(o for bit, o in enumerate(ABSTRACT_OUTCOMES) if mask >> bit & 1)
        for mask in range(1 << len(ABSTRACT_OUTCOMES))
    ]


def assignments() -> Iterator[AbstractAssignment]:
    """All assignments, lexicographic in the per-action subset masks."""
    for combo in itertools.product(_subsets(), repeat=len(ABSTRACT_ACTIONS)):
        yield AbstractAssignment(combo)


def verify_isolated(gov: GovernorSpec, formula: Formula, source: str = "") -> VerificationReport:
    """Check ``formula`` against the engine's beliefs for every assignment.

    The first falsifying assignment in enumeration order is reported, which is
    also the lexicographically least one.
    """
    names = agent_roles(gov, roles=(ENGINE,))
    resolve_agents(formula, names)
    template = initial_state(gov, ABSTRACT_ACTIONS)
    checked = 0
    for assignment in assignments():
        table = dict(zip(ABSTRACT_ACTIONS, assignment.outcomes))
        engine = evaluate_outcomes(model_applicable_actions(template, table.__getitem__))
        checked += 1
        if not holds(formula, [{ENGINE: engine.beliefs}], names):
            return VerificationReport(formula, False, assignment, checked, source, {"selected": sorted(map(str, engine.selected))})
    return VerificationReport(formula, True, None, checked, source)
