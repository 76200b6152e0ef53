"""Command-line interface: ``ethical-governor <command> ...``.

Exit codes: 0 on success (every property holds), 1 if a property is
violated, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib.resources import files
from pathlib import Path
from typing import Callable, Sequence, TypeVar

from . import report as fmt
from .checker import (
    UndefinedLabel,
    UnknownAgent,
    build_dtmc,
    check_property,
    explore,
    export_prism,
    monte_carlo,
    reachability_probability,
    sample_trace,
    verify_isolated,
)
from .checker.scenario import Scenario
from .dsl import GovernorParseError, GovernorSpec, parse_governor
from .gridworld import GridConfig, ScenarioParseError, parse_scenario
from .properties import Formula, PropertyParseError, parse_property_file

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2

T = TypeVar("T")


class InputError(Exception):
    """Bad command-line input; reported on stderr with exit code 2."""


def data_path(name: str) -> str:
    return str(files("ethical_governor").joinpath("data", name))


def _load(path: str, parse: Callable[[str], T], errors: tuple[type[Exception], ...]) -> T:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return parse(text)
    except errors as exc:
        raise InputError(f"{path}: {exc}") from None


def load_governor(path: str) -> GovernorSpec:
    return _load(path, parse_governor, (GovernorParseError, ValueError))


def load_scenario(path: str) -> GridConfig:
    return _load(path, parse_scenario, (ScenarioParseError, ValueError))


def load_properties(path: str) -> list[tuple[int, str, Formula]]:
    return _load(path, parse_property_file, (PropertyParseError,))


def _emit_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.scenario)
    gov = load_governor(args.governor)
    trace = sample_trace(Scenario(cfg, gov), random.Random(args.seed))
    if args.format == "json":
        _emit_json({"schema": "ethical-governor.run/1", "seed": args.seed, **fmt.trace_to_dict(trace)})
    else:
        for pos in trace.positions:
            print("\n".join(fmt.format_position(pos)))
    return EXIT_OK


def _check_all(props, run_one, unit: str, fmt_name: str) -> int:
    reports = []
    for number, source, formula in props:
        try:
            reports.append(run_one(formula, f"line {number}: {source}"))
        except UnknownAgent as exc:
            raise InputError(f"line {number}: {exc}") from None
    failed = sum(not r.holds for r in reports)
    if fmt_name == "json":
        _emit_json({
            "schema": fmt.REPORT_SCHEMA,
            "reports": [fmt.report_to_dict(r) for r in reports],
            "summary": {"properties": len(reports), "violated": failed},
        })
    else:
        for r in reports:
            print(fmt.format_report(r, unit))
        print(f"{len(reports)} properties checked, {failed} violated")
    return EXIT_VIOLATED if failed else EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.scenario)
    gov = load_governor(args.governor)
    props = load_properties(args.properties)
    traces = explore(cfg, gov) if props else []
    return _check_all(props, lambda f, src: check_property(f, traces, gov, src), "traces", args.format)


def cmd_verify_isolated(args: argparse.Namespace) -> int:
    gov = load_governor(args.governor)
    props = load_properties(args.properties)
    return _check_all(props, lambda f, src: verify_isolated(gov, f, src), "assignments", args.format)


def cmd_prob(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.scenario)
    gov = load_governor(args.governor)
    scenario = Scenario(cfg, gov)
    model = build_dtmc(cfg, gov, scenario)
    labels = args.labels.split(",") if args.labels else sorted(model.labels)
    unknown = [label for label in labels if label not in model.labels]
    if unknown:
        raise InputError(str(UndefinedLabel(unknown[0], model.labels)))
    exact = {label: reachability_probability(model, label) for label in labels}
    estimates = monte_carlo(cfg, gov, args.mc, args.seed, scenario) if args.mc else {}
    if args.format == "json":
        rows = {}
        for label, p in exact.items():
            rows[label] = {"exact": fmt.format_fraction(p), "decimal": float(p)}
            if label in estimates:
                rows[label]["estimate"] = estimates[label].mean
                rows[label]["stderr"] = estimates[label].stderr
        _emit_json({"schema": fmt.PROBABILITY_SCHEMA, "states": model.size,
                    "samples": args.mc, "seed": args.seed if args.mc else None, "labels": rows})
        return EXIT_OK
    for label, p in exact.items():
        line = f"{label}: {float(p):.10g} ({fmt.format_fraction(p)})"
        if label in estimates:
            e = estimates[label]
            line += f"  mc {e.mean:.5f} ± {e.stderr:.5f} (n={e.n}, seed={args.seed})"
        print(line)
    return EXIT_OK


def cmd_export_prism(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.scenario)
    gov = load_governor(args.governor)
    model = build_dtmc(cfg, gov)
    try:
        Path(args.out).write_text(export_prism(model), encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc.strerror or exc}") from None
    print(f"wrote {args.out}: {model.size} states, {model.transition_count()} transitions")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ethical-governor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str, scenario: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        if scenario:
            p.add_argument("--scenario", default=data_path("case_study.scn"), help="scenario file")
        p.add_argument("--governor", default=data_path("ethical_g.gov"), help="governor file")
        return p

    p = add("run", cmd_run, "sample one run and print it step by step")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("check", cmd_check, "check properties over every branch of the scenario")
    p.add_argument("--properties", default=data_path("case_study.props"), help="one formula per line")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("prob", cmd_prob, "exact reachability probabilities per label")
    p.add_argument("--labels", help="comma-separated labels (default: all)")
    p.add_argument("--mc", type=int, default=0, metavar="N", help="also estimate with N sampled runs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("export-prism", cmd_export_prism, "write the scenario's DTMC in PRISM format")
    p.add_argument("--out", required=True, help="output path")

    p = add("verify-isolated", cmd_verify_isolated, "verify the governor over all abstract outcome assignments",
            scenario=False)
    p.add_argument("--properties", default=data_path("isolated.props"), help="one formula per line")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "mc", 0) < 0:
        print("error: --mc must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
