"""One test per acceptance criterion, each reporting a PASS/FAIL line."""

import random
import time
from fractions import Fraction

from ethical_governor.checker import (
    Scenario,
    build_dtmc,
    check_property,
    explore,
    export_prism,
    monte_carlo,
    parse_prism,
    reachability_probability,
    trace_weight_probability,
    verify_isolated,
)
from ethical_governor.dsl import parse_governor, serialize_governor
from ethical_governor.gridworld import FALLEN, supercover_line
from ethical_governor.properties import parse_property, parse_property_file
from ethical_governor.report import format_state

from conftest import read_data
from oracles import brute_force_filter, sampled_cells
from test_checker import replay_check
from test_core import ann, random_instance, rows_of
from ethical_governor.core import filter_by_precedence

REFERENCE_H2 = Fraction(23, 32)  # 0.71875


def test_criterion_1_isolated_engine(gov, record):
    props = parse_property_file(read_data("isolated.props"))
    details, ok = [], True
    for number, source, formula in props:
        start = time.perf_counter()
        report = verify_isolated(gov, formula, source)
        elapsed = time.perf_counter() - start
        good = report.holds and report.checked == 65536 and elapsed < 10
        ok &= good
        details.append(f"line {number} holds={report.holds} checked={report.checked} {elapsed:.2f}s")
    record("1", ok and len(props) == 2, "; ".join(details))
    assert ok and len(props) == 2


def test_criterion_2_case_study_safety(cfg, gov, record):
    start = time.perf_counter()
    scenario = Scenario(cfg, gov)
    traces = explore(cfg, gov, scenario)
    results = {}
    for h in ("h1", "h2"):
        f = parse_property(f"G((B(r,danger({h})) & B(r,path_to({h}))) -> G(!B(r,{h}(hole))))")
        results[h] = check_property(f, traces, gov).holds
    refuted = check_property(parse_property("G(!B(r,h2(hole)))"), traces, gov)
    elapsed = time.perf_counter() - start
    cx = refuted.counterexample
    valid = cx is not None and any(s.human("h2").status == FALLEN for s in cx.states)
    if valid:
        replay_check(cx, cfg, scenario)
    ok = results["h1"] and results["h2"] and not refuted.holds and valid and elapsed < 60
    record("2", ok, f"h1 holds={results['h1']} h2 holds={results['h2']} "
                    f"unconditional refuted={not refuted.holds} counterexample valid={valid} "
                    f"traces={len(traces)} {elapsed:.2f}s")
    assert ok


def _diverging_traces(traces, limit=3):
    falls = sorted((t for t in traces if any(s.human("h2").status == FALLEN for s in t.states)),
                   key=lambda t: -t.weight)
    lines = []
    for t in falls[:limit]:
        path = " | ".join(format_state(s) for s in t.states)
        lines.append(f"    weight {t.weight}: {path}")
    return len(falls), lines


def test_criterion_3_probabilities(cfg, gov, scenario, model, traces, record):
    p = {name: reachability_probability(model, name) for name in model.labels}
    oracle = {name: trace_weight_probability(traces, pred) for name, pred in scenario.labels.items()}
    h2 = p["h2_hole"]
    dyadic = h2.denominator & (h2.denominator - 1) == 0
    est = monte_carlo(cfg, gov, 100_000, 7, scenario)["h2_hole"]
    within = abs(est.mean - float(h2)) <= 3 * est.stderr
    ok = p["h1_hole"] == 0 and dyadic and p == oracle and within
    record("3", ok, f"P(h1_hole)={p['h1_hole']} P(h2_hole)={h2} ~ {float(h2):.6f} "
                    f"oracle equal={p == oracle} mc={est.mean:.5f}+-{est.stderr:.5f} "
                    f"(n=100000, seed=7, |diff|={abs(est.mean - float(h2)):.5f})")
    n_falls, lines = _diverging_traces(traces)
    matched = h2 == REFERENCE_H2
    stretch = (f"[{'MATCH' if matched else 'MISS'}] criterion 3 stretch: P(h2_hole)={float(h2):.6f} "
               f"vs target {float(REFERENCE_H2)} (deviation {float(h2 - REFERENCE_H2):+.6f}); "
               f"{n_falls} of {len(traces)} traces have h2 falling, heaviest:")
    from conftest import ACCEPTANCE_LINES
    ACCEPTANCE_LINES.append(stretch)
    ACCEPTANCE_LINES.extend(lines)
    print(stretch, *lines, sep="\n")
    assert ok


def test_criterion_4_engine_oracle(record):
    rng = random.Random(20240601)
    mismatches = scale = perm = 0
    for _ in range(1000):
        order, table, severity = random_instance(rng)
        got = filter_by_precedence(order, ann(table), severity, set(table))
        mismatches += got != brute_force_filter(order, rows_of(table), severity, list(table))
        factor = rng.randint(2, 9)
        scaled = {k: v * factor for k, v in severity.items()}
        scale += filter_by_precedence(order, ann(table), scaled, set(table)) != got
        items = list(table.items())
        rng.shuffle(items)
        perm += filter_by_precedence(order, ann(dict(items)), severity, [a for a, _ in items]) != got
    ok = mismatches == scale == perm == 0
    record("4", ok, f"1000 instances: oracle mismatches={mismatches} "
                    f"scale violations={scale} permutation violations={perm}")
    assert ok


def test_criterion_5_supercover(record):
    cells = [(x, y) for y in range(5) for x in range(5)]
    bad = [(p, q) for p in cells for q in cells if set(supercover_line(p, q)) != sampled_cells(p, q)]
    record("5", not bad, f"{len(cells) ** 2} ordered pairs, {len(bad)} mismatches")
    assert not bad


def test_criterion_6_self_preservation(cfg, model, record):
    on_hole = [s for s in model.states if s.robot == cfg.hole]
    ok = not on_hole and reachability_probability(model, "robot_hole") == 0
    record("6", ok, f"{model.size} reachable states, {len(on_hole)} with the robot on the hole")
    assert ok


def test_criterion_7_prism_round_trip(cfg, gov, model, record):
    text = export_prism(model)
    again = export_prism(build_dtmc(cfg, gov))
    back = parse_prism(text)
    same = all(reachability_probability(back, n) == reachability_probability(model, n) for n in model.labels)
    ok = same and text == again
    record("7", ok, f"{model.size} states re-parsed, probabilities equal={same}, byte-stable={text == again}")
    assert ok


def test_criterion_8_dsl_round_trip(record):
    text = read_data("ethical_g.gov")
    spec = parse_governor(text)
    again = parse_governor(serialize_governor(spec))
    ok = again == spec and spec.precedence == ("human", "robot")
    record("8", ok, f"parse -> serialize -> parse equal={again == spec}")
    assert ok
