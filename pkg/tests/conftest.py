import pytest

_acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one summary line for an acceptance check.

    The line is printed (visible on failure or with -s) and repeated in the
    terminal summary so plain `pytest -v` runs show every verdict.
    """

    def record(line: str) -> None:
        _acceptance_lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance")
        for line in _acceptance_lines:
            terminalreporter.line(line)
