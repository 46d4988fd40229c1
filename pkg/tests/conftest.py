import pytest

from toposub.position import solve_position_table
from toposub.subfile import builtin
from toposub.topo import Tower


@pytest.fixture(scope="session")
def trib():
    return builtin("tribonacci")


@pytest.fixture(scope="session")
def tau():
    return builtin("tau")


@pytest.fixture(scope="session")
def tower(trib):
    t = Tower(trib, "C")
    t.level(7)
    return t


@pytest.fixture(scope="session")
def table(tower):
    return solve_position_table(tower)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
