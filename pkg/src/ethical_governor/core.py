"""Consequence engine: annotate applicable actions with predicted outcomes, then
filter them by ethical precedence.

The engine is a pure value (:class:`EngineState`). The two transition rules,
:func:`model_applicable_actions` and :func:`evaluate_outcomes`, return new
states. The environment model is passed in as a callable and never stored.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import NamedTuple

from .terms import Term, term

ActorClass = str
OutcomeKind = str


class EngineError(Exception):
    """Base class for consequence engine failures."""


class NoApplicableActions(EngineError):
    def __init__(self) -> None:
        super().__init__("no applicable actions: nothing to govern")


class StaleAnnotations(EngineError):
    def __init__(self, action: ActionId) -> None:
        super().__init__(f"stale annotations: no outcome annotation for {action}")
        self.action = action


class UnscoredOutcome(EngineError):
    def __init__(self, kind: OutcomeKind) -> None:
        super().__init__(f"unscored outcome: {kind!r} has no severity")
        self.kind = kind


class Outcome(NamedTuple):
    """Predicted consequence of an action for one class of actor."""

    actor: ActorClass
    kind: OutcomeKind

    def as_term(self) -> Term:
        return term(self.actor, self.kind)

    def __str__(self) -> str:
        return f"<{self.actor},{self.kind}>"


class ActionId(NamedTuple):
    name: str
    args: tuple[int, ...] = ()

    def as_term(self) -> Term:
        return term(self.name, *self.args)

    def __str__(self) -> str:
        return str(self.as_term())


class AnnotatedAction(NamedTuple):
    action: ActionId
    outcomes: tuple[Outcome, ...]  # multiset; duplicates count


SeverityMap = Mapping[OutcomeKind, int]
Precedence = Sequence[ActorClass]
Model = Callable[[ActionId], Iterable[Outcome]]


@lru_cache(maxsize=4096)
def sel_belief(action: ActionId) -> Term:
    return Term("sel", (action.as_term(),))


@lru_cache(maxsize=16384)
def outcome_belief(action: ActionId, outcome: Outcome) -> Term:
    return Term("outcome", (action.as_term(), outcome.as_term()))


def check_precedence(order: Precedence) -> None:
    seen = set()
    for actor in order:
        if not actor:
            raise ValueError("actor class names must be non-empty")
        if actor in seen:
            raise ValueError(f"duplicate actor class {actor!r} in precedence")
        seen.add(actor)


def check_severity(severity: SeverityMap) -> None:
    for kind, score in severity.items():
        if not isinstance(score, int) or isinstance(score, bool) or score < 0:
            raise ValueError(f"severity of {kind!r} must be a non-negative integer, got {score!r}")


@dataclass(frozen=True)
class EngineState:
    """The engine tuple: names, applicable actions, annotations, selection,
    precedence, severity and the recorded beliefs."""

    ce_name: str
    agent_name: str
    applicable: tuple[ActionId, ...]
    precedence: tuple[ActorClass, ...]
    severity: Mapping[OutcomeKind, int]
    annotated: tuple[AnnotatedAction, ...] = ()
    selected: frozenset[ActionId] = frozenset()
    beliefs: frozenset[Term] = field(default=frozenset())

    def __post_init__(self) -> None:
        check_precedence(self.precedence)
        check_severity(self.severity)

    def outcomes_of(self, action: ActionId) -> tuple[Outcome, ...]:
        for entry in self.annotated:
            if entry.action == action:
                return entry.outcomes
        raise StaleAnnotations(action)


def initial_state(gov, applicable: Iterable[ActionId]) -> EngineState:
    """Fresh engine for ``gov`` (anything with name/agent/severity/precedence)."""
    return EngineState(
        ce_name=gov.name,
        agent_name=gov.agent,
        applicable=tuple(applicable),
        precedence=tuple(gov.precedence),
        severity=gov.severity,
    )


def model_applicable_actions(state: EngineState, model: Model) -> EngineState:
    """Annotate every applicable action with ``model(action)``.

    Any previous annotation is replaced. An ``outcome(a, o)`` belief is
    recorded for each predicted outcome.
    """
    if not state.applicable:
        raise NoApplicableActions()
    annotated = tuple(AnnotatedAction(a, tuple(model(a))) for a in state.applicable)
    beliefs = set(state.beliefs)
    for a, outcomes in annotated:
        for o in outcomes:
            beliefs.add(outcome_belief(a, o))
    return replace(state, annotated=annotated, beliefs=frozenset(beliefs))


def _annotation_index(annotated: Iterable[AnnotatedAction]) -> dict[ActionId, tuple[Outcome, ...]]:
    return {a: os for a, os in annotated}


def action_severity_sum(
    a: ActionId,
    h: ActorClass,
    annotated: Iterable[AnnotatedAction] | Mapping[ActionId, tuple[Outcome, ...]],
    severity: SeverityMap,
) -> int:
    """Total severity of the outcomes of ``a`` that concern actor class ``h``."""
    index = annotated if isinstance(annotated, Mapping) else _annotation_index(annotated)
    try:
        outcomes = index[a]
    except KeyError:
        raise StaleAnnotations(a) from None
    total = 0
    for actor, kind in outcomes:
        if actor != h:
            continue
        try:
            total += severity[kind]
        except KeyError:
            raise UnscoredOutcome(kind) from None
    return total


def filter_for_actor(
    h: ActorClass,
    annotated: Iterable[AnnotatedAction] | Mapping[ActionId, tuple[Outcome, ...]],
    severity: SeverityMap,
    candidates: Iterable[ActionId],
) -> frozenset[ActionId]:
    """Keep the candidates whose severity sum for ``h`` is minimal."""
    index = annotated if isinstance(annotated, Mapping) else _annotation_index(annotated)
    sums = {a: action_severity_sum(a, h, index, severity) for a in candidates}
    if not sums:
        return frozenset()
    best = min(sums.values())
    return frozenset(a for a, s in sums.items() if s == best)


def filter_by_precedence(
    order: Sequence[ActorClass],
    annotated: Iterable[AnnotatedAction] | Mapping[ActionId, tuple[Outcome, ...]],
    severity: SeverityMap,
    candidates: Iterable[ActionId],
) -> frozenset[ActionId]:
    """Apply :func:`filter_for_actor` for each actor class, highest priority first."""
    index = annotated if isinstance(annotated, Mapping) else _annotation_index(annotated)
    result = frozenset(candidates)
    for h in order:
        result = filter_for_actor(h, index, severity, result)
    return result


def evaluate_outcomes(state: EngineState) -> EngineState:
    """Select the most ethical applicable actions and record ``sel(a)`` beliefs."""
    index = _annotation_index(state.annotated)
    for a in state.applicable:
        if a not in index:
            raise StaleAnnotations(a)
    for outcomes in index.values():
        for o in outcomes:
            if o.kind not in state.severity:
                raise UnscoredOutcome(o.kind)
    selected = filter_by_precedence(state.precedence, index, state.severity, state.applicable)
    beliefs = state.beliefs | {sel_belief(a) for a in selected}
    return replace(state, selected=selected, beliefs=beliefs)
