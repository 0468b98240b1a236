import pytest

from adsstar.verify_cli import run_suite

ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def full_report():
    """One run of every registered check, shared by the acceptance and CLI tests."""
    return run_suite("all")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
