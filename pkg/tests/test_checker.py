import itertools
import random
from fractions import Fraction

import pytest

from ethical_governor.checker import (
    Dtmc,
    PrismParseError,
    Scenario,
    UndefinedLabel,
    UnknownAgent,
    assignments,
    build_dtmc,
    check_property,
    explore,
    export_prism,
    monte_carlo,
    parse_prism,
    reachability_probability,
    sample_trace,
    trace_weight_probability,
    verify_isolated,
)
from ethical_governor.checker.temporal import agent_roles, truth_values
from ethical_governor.gridworld import FALLEN, GridConfig, percepts, world_step
from ethical_governor.properties import parse_property

from conftest import read_data

H2_NEVER_FALLS = parse_property("G(!B(r,h2(hole)))")


def safety(h):
    return parse_property(f"G((B(r,danger({h})) & B(r,path_to({h}))) -> G(!B(r,{h}(hole))))")


# explore

def test_zero_humans_single_trace(empty_cfg, gov):
    traces = explore(empty_cfg, gov)
    assert len(traces) == 1
    assert traces[0].weight == 1


def test_one_human_first_step_branches(gov):
    cfg = GridConfig(humans=(("h1", (0, 0)),))
    sc = Scenario(cfg, gov)
    assert len(sc.successors(sc.initial)) == 2


def test_traces_are_maximal_and_distinct(traces, scenario):
    assert all(scenario.is_terminal(t.states[-1]) for t in traces)
    assert all(not scenario.is_terminal(s) for t in traces for s in t.states[:-1])
    assert len({t.states for t in traces}) == len(traces)


def test_trace_weights_sum_to_one(traces):
    assert sum((t.weight for t in traces), Fraction(0)) == 1


def test_branching_bounded(model):
    for state, row in zip(model.states, model.transitions):
        active = sum(h.status == "active" for h in state.humans)
        assert len(row) <= 2 ** active


def test_status_changes_at_most_once(traces):
    for t in traces:
        for i in range(len(t.states[0].humans)):
            statuses = [s.humans[i].status for s in t.states]
            changes = sum(a != b for a, b in zip(statuses, statuses[1:]))
            assert changes <= 1


def test_robot_never_on_hole(model, cfg):
    assert all(s.robot != cfg.hole for s in model.states)


def test_sampled_runs_are_explored_traces(traces, scenario):
    explored = {t.states for t in traces}
    rng = random.Random(11)
    seen = set()
    for _ in range(20000):
        run = sample_trace(scenario, rng).states
        assert run in explored
        seen.add(run)
    assert len(seen) <= len(explored)


# check_property

def test_safety_properties_hold(traces, gov):
    for h in ("h1", "h2"):
        report = check_property(safety(h), traces, gov)
        assert report.holds and report.checked == len(traces)


def test_unconditional_property_refuted_with_valid_counterexample(traces, gov, cfg, scenario):
    report = check_property(H2_NEVER_FALLS, traces, gov)
    assert not report.holds
    cx = report.counterexample
    assert any(s.human("h2").status == FALLEN for s in cx.states)
    replay_check(cx, cfg, scenario)
    # re-evaluate on views rebuilt from scratch
    views = [{"robot": percepts(s, cfg), "ce": frozenset()} for s in cx.states]
    assert not truth_values(H2_NEVER_FALLS, views, agent_roles(gov))[0]


def replay_check(trace, cfg, scenario):
    states = trace.states
    assert states[0] == scenario.initial
    weight = Fraction(1)
    for pos, nxt in zip(trace.positions, states[1:]):
        assert pos.action == scenario.decide(pos.state).action
        active = scenario.active_count(pos.state)
        coins = [c for c in itertools.product((False, True), repeat=active)
                 if world_step(pos.state, pos.action, c, cfg) == nxt]
        assert coins
        p = cfg.move_probability
        weight *= sum(p ** sum(c) * (1 - p) ** (active - sum(c)) for c in coins)
    assert weight == trace.weight
    assert all(pos.percepts == percepts(pos.state, cfg) for pos in trace.positions)


def test_unknown_agent_rejected(traces, gov):
    with pytest.raises(UnknownAgent, match="nobody"):
        check_property(parse_property("B(nobody,x)"), traces, gov)


def test_agent_aliases(traces, gov):
    a = check_property(parse_property("G(!B(robot,h1(hole)))"), traces, gov)
    b = check_property(parse_property("G(!B(r,h1(hole)))"), traces, gov)
    assert a.holds and b.holds
    assert check_property(parse_property("B(ethical_g,sel(moveTo(4,0)))"), traces, gov).holds


def test_engine_beliefs_visible_on_traces(traces, gov):
    assert check_property(parse_property("B(ce,sel(moveTo(4,0)))"), traces, gov).holds


# DTMC

def test_zero_human_chain(empty_cfg, gov):
    m = build_dtmc(empty_cfg, gov)
    m.check()
    assert all(len(row) == 1 and row[0][0] == 1 for row in m.transitions)
    assert reachability_probability(m, "at_goal") == 1


def test_two_active_humans_four_quarters(scenario):
    row = scenario.successors(scenario.initial)
    assert [w for w, _ in row] == [Fraction(1, 4)] * 4


def test_rows_sum_to_one(model):
    model.check()
    for row in model.transitions:
        assert sum((p for p, _ in row), Fraction(0)) == 1


def test_reachability_matches_trace_weights(model, traces, scenario):
    for name, pred in scenario.labels.items():
        assert reachability_probability(model, name) == trace_weight_probability(traces, pred)


def test_h1_never_falls(model):
    assert reachability_probability(model, "h1_hole") == 0


def test_probability_of_initial_and_empty_labels():
    m = Dtmc([[(Fraction(1, 2), 1), (Fraction(1, 2), 2)], [(Fraction(1), 1)], [(Fraction(1), 2)]],
             {"start": frozenset({0}), "none": frozenset(), "left": frozenset({1})})
    assert reachability_probability(m, "start") == 1
    assert reachability_probability(m, "none") == 0
    assert reachability_probability(m, "left") == Fraction(1, 2)
    with pytest.raises(UndefinedLabel, match="available labels: left, none, start"):
        reachability_probability(m, "right")


def test_dtmc_check_rejects_bad_rows():
    with pytest.raises(ValueError, match="!= 1"):
        Dtmc([[(Fraction(1, 2), 0)]], {}).check()
    with pytest.raises(ValueError, match="cycle"):
        Dtmc([[(Fraction(1), 1)], [(Fraction(1), 0)]], {}).check()


# PRISM

def test_minimal_prism_text():
    m = Dtmc([[(Fraction(1), 0)]], {"x": frozenset({0}), "empty": frozenset()})
    assert export_prism(m) == (
        "dtmc\n\nmodule M\n  s : [0..0] init 0;\n  [] s=0 -> 1:(s'=0);\nendmodule\n\n"
        'label "empty" = false;\nlabel "x" = s=0;\n'
    )


def test_quarter_printed_as_fraction(model):
    text = export_prism(model)
    assert "1/4:(s'=" in text and "0.25" not in text
    assert text.startswith("dtmc\n")


def test_prism_round_trip(model):
    text = export_prism(model)
    back = parse_prism(text)
    assert back.transitions == model.transitions
    assert back.labels == model.labels
    for name in model.labels:
        assert reachability_probability(back, name) == reachability_probability(model, name)
    assert export_prism(back) == text


def test_prism_byte_stable(cfg, gov, model):
    assert export_prism(build_dtmc(cfg, gov)) == export_prism(model)


def test_prism_reader_errors():
    with pytest.raises(PrismParseError, match="dtmc"):
        parse_prism("mdp\n")
    with pytest.raises(PrismParseError, match="malformed update"):
        parse_prism("dtmc\nmodule M\n  s : [0..0] init 0;\n  [] s=0 -> 0.5:(s'=0);\nendmodule\n")
    with pytest.raises(ValueError):
        parse_prism("dtmc\nmodule M\n  s : [0..0] init 0;\n  [] s=0 -> 1/2:(s'=0);\nendmodule\n")


# Monte Carlo

def test_monte_carlo_deterministic(cfg, gov, scenario):
    a = monte_carlo(cfg, gov, 500, 3, scenario)
    b = monte_carlo(cfg, gov, 500, 3)
    assert a == b


def test_monte_carlo_certain_and_impossible(cfg, gov, scenario):
    est = monte_carlo(cfg, gov, 2000, 1, scenario)
    assert est["h1_hole"].mean == 0 and est["robot_hole"].mean == 0
    assert est["at_goal"].mean == 1


def test_monte_carlo_within_three_se(cfg, gov, scenario, model):
    est = monte_carlo(cfg, gov, 100000, 7, scenario)
    for name, e in est.items():
        exact = float(reachability_probability(model, name))
        assert abs(e.mean - exact) <= 3 * e.stderr or e.mean == exact


def test_monte_carlo_rejects_empty_sample(cfg, gov):
    with pytest.raises(ValueError):
        monte_carlo(cfg, gov, 0, 1)


# isolated verification

SEL_HOLE = ("G((B(ce,sel({a})) & B(ce,outcome({a},human(hole)))) -> "
            "(B(ce,outcome({b},human(hole))) & B(ce,outcome({c},human(hole))) & B(ce,outcome({d},human(hole)))))")


def test_assignment_count():
    assert sum(1 for _ in assignments()) == 65536


@pytest.mark.parametrize("first", ["a2", "a3", "a4"])
def test_isolated_symmetry(gov, inverted_gov, first):
    others = [a for a in ("a1", "a2", "a3", "a4") if a != first]
    f = parse_property(SEL_HOLE.format(a=first, b=others[0], c=others[1], d=others[2]))
    assert verify_isolated(gov, f).holds
    assert not verify_isolated(inverted_gov, f).holds


def test_inverted_counterexample_is_real(inverted_gov):
    f = parse_property(SEL_HOLE.format(a="a1", b="a2", c="a3", d="a4"))
    report = verify_isolated(inverted_gov, f)
    assert not report.holds
    cx = report.counterexample.as_dict()
    assert "a1" in report.stats["selected"]
    assert "<human,hole>" in cx["a1"]
    assert any("<human,hole>" not in cx[a] for a in ("a2", "a3", "a4"))


def test_isolated_rejects_robot_agent(gov):
    with pytest.raises(UnknownAgent):
        verify_isolated(gov, parse_property("B(r,danger(h1))"))


def test_shipped_property_files_parse():
    from ethical_governor.properties import parse_property_file
    for name in ("case_study.props", "case_study_outer_always.props", "h2_never_falls.props",
                 "isolated.props", "isolated_outer_always.props"):
        assert parse_property_file(read_data(name))
