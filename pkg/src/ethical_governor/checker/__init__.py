"""Exhaustive and probabilistic analysis of governed scenarios."""

from .dtmc import Dtmc, UndefinedLabel, build_dtmc, reachability_probability, trace_weight_probability
from .explore import Position, Trace, VerificationReport, check_property, explore, iter_traces
from .isolated import AbstractAssignment, assignments, verify_isolated
from .prism import PrismParseError, export_prism, parse_prism
from .sampling import Estimate, monte_carlo, sample_trace
from .scenario import Scenario, state_labels
from .temporal import UnknownAgent

__all__ = [
    "AbstractAssignment",
    "Dtmc",
    "Estimate",
    "Position",
    "PrismParseError",
    "Scenario",
    "Trace",
    "UndefinedLabel",
    "UnknownAgent",
    "VerificationReport",
    "assignments",
    "build_dtmc",
    "check_property",
    "explore",
    "export_prism",
    "iter_traces",
    "monte_carlo",
    "parse_prism",
    "reachability_probability",
    "sample_trace",
    "state_labels",
    "trace_weight_probability",
    "verify_isolated",
]
