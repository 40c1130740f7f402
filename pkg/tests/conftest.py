import pytest

from helpers import ACCEPTANCE_LINES, fix_a, fix_b


@pytest.fixture
def game_a():
    return fix_a()


@pytest.fixture
def game_b():
    return fix_b()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
