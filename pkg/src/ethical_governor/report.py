"""Text and JSON renderings of states, traces and verification reports."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .checker.explore import Position, Trace, VerificationReport
from .checker.isolated import AbstractAssignment
from .gridworld import WorldState

REPORT_SCHEMA = "ethical-governor.verification-report/1"
PROBABILITY_SCHEMA = "ethical-governor.probabilities/1"


def format_cell(cell) -> str:
    return f"({cell[0]},{cell[1]})"


def format_state(state: WorldState) -> str:
    humans = " ".join(f"{h.id}={format_cell(h.pos)}:{h.status}" for h in state.humans)
    return f"step={state.step} robot={format_cell(state.robot)}" + (f" {humans}" if humans else "")


def format_fraction(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def _sorted_strs(items) -> list[str]:
    return sorted(str(x) for x in items)


def format_position(pos: Position) -> list[str]:
    lines = [format_state(pos.state), f"  percepts: {{{', '.join(_sorted_strs(pos.percepts))}}}"]
    if pos.action is None:
        lines.append("  terminal")
    else:
        lines.append(f"  selected: {{{', '.join(_sorted_strs(pos.selected))}}}")
        lines.append(f"  action:   {pos.action}")
    return lines


def format_trace(trace: Trace) -> str:
    lines = [f"trace (probability {format_fraction(trace.weight)}):"]
    for pos in trace.positions:
        lines += ["  " + line for line in format_position(pos)]
    return "\n".join(lines)


def position_to_dict(pos: Position) -> dict[str, Any]:
    state = pos.state
    return {
        "step": state.step,
        "robot": list(state.robot),
        "humans": [{"id": h.id, "pos": list(h.pos), "status": h.status} for h in state.humans],
        "percepts": _sorted_strs(pos.percepts),
        "selected": _sorted_strs(pos.selected),
        "action": None if pos.action is None else str(pos.action),
    }


def trace_to_dict(trace: Trace) -> dict[str, Any]:
    return {
        "probability": format_fraction(trace.weight),
        "positions": [position_to_dict(p) for p in trace.positions],
    }


def report_to_dict(report: VerificationReport) -> dict[str, Any]:
    cx = report.counterexample
    if isinstance(cx, Trace):
        counterexample: Any = {"kind": "trace", **trace_to_dict(cx)}
    elif isinstance(cx, AbstractAssignment):
        counterexample = {"kind": "assignment", "outcomes": cx.as_dict(), **report.stats}
    else:
        counterexample = None
    return {
        "schema": REPORT_SCHEMA,
        "property": str(report.property),
        "source": report.source,
        "holds": report.holds,
        "checked": report.checked,
        "counterexample": counterexample,
    }


def format_report(report: VerificationReport, unit: str = "traces") -> str:
    verdict = "HOLDS" if report.holds else "VIOLATED"
    lines = [f"{verdict}: {report.source or report.property}", f"  {report.checked} {unit} checked"]
    cx = report.counterexample
    if isinstance(cx, Trace):
        lines.append("  counterexample " + format_trace(cx).replace("\n", "\n  "))
    elif isinstance(cx, AbstractAssignment):
        lines.append(f"  falsifying assignment: {cx}")
        if "selected" in report.stats:
            lines.append(f"  selected: {{{', '.join(report.stats['selected'])}}}")
    return "\n".join(lines)
