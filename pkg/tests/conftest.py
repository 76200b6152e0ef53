from pathlib import Path

import pytest

from ethical_governor.checker import Scenario, build_dtmc, explore
from ethical_governor.cli import data_path
from ethical_governor.dsl import parse_governor
from ethical_governor.gridworld import GridConfig, parse_scenario


def read_data(name: str) -> str:
    return Path(data_path(name)).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def gov():
    return parse_governor(read_data("ethical_g.gov"))


@pytest.fixture(scope="session")
def inverted_gov():
    return parse_governor(read_data("inverted.gov"))


@pytest.fixture(scope="session")
def cfg():
    return parse_scenario(read_data("case_study.scn"))


@pytest.fixture(scope="session")
def scenario(cfg, gov):
    return Scenario(cfg, gov)


@pytest.fixture(scope="session")
def traces(cfg, gov, scenario):
    return explore(cfg, gov, scenario)


@pytest.fixture(scope="session")
def model(cfg, gov, scenario):
    return build_dtmc(cfg, gov, scenario)


@pytest.fixture(scope="session")
def empty_cfg():
    return GridConfig(humans=())


# Acceptance results, printed in the terminal summary so they appear in every run.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    def _record(criterion: str, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
