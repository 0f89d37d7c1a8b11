import pytest

from nrpq.fixtures import g0
from nrpq.graph import to_facts

# one "criterion N: PASS/FAIL ..." line per acceptance check, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def G0():
    return g0()


@pytest.fixture
def D0():
    return to_facts(g0())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
