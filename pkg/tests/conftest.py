import pytest

ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance():
    """Record ``(number, title, passed, detail, seconds)`` for the summary table."""

    def record(number, title, passed, detail, seconds):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES[number] = f"[{status}] #{number:>2} {title}: {detail} ({seconds:.2f} s)"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
