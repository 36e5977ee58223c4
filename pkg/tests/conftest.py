import pytest

from helpers import ACCEPTANCE_LINES
from spherarea.patterns import enumerate_admissible


@pytest.fixture(scope="session")
def catalog():
    return enumerate_admissible()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
