from pathlib import Path

import pytest

from delwca.syntax import load_scenario

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "delwca" / "fixtures"


@pytest.fixture(scope="session")
def hexa():
    return load_scenario(FIXTURES / "hexa.delwca")


@pytest.fixture(scope="session")
def meeting():
    return load_scenario(FIXTURES / "meeting.delwca")


@pytest.fixture(scope="session")
def students3():
    return load_scenario(FIXTURES / "students3.delwca")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
