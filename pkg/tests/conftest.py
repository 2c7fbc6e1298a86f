from __future__ import annotations

import pytest

from regtrace.graph import complete, cycle, hypercube, petersen, random_regular

ACCEPTANCE_GRAPHS = {
    "cycle5": lambda: cycle(5),
    "cycle6": lambda: cycle(6),
    "K4": lambda: complete(4),
    "cube": lambda: hypercube(3),
    "petersen": petersen,
    "random3reg": lambda: random_regular(10, 3, seed=7),
}

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def graphs():
    return {name: make() for name, make in ACCEPTANCE_GRAPHS.items()}


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def c5():
    return cycle(5)


@pytest.fixture
def pet():
    return petersen()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
