"""Collects one summary line per acceptance criterion and prints them at the end of the run."""

import pytest

_LINES = {}


@pytest.fixture
def verdict():
    """``verdict(number, passed, detail)`` records a criterion outcome and returns ``passed``."""

    def record(number, passed, detail):
        _LINES[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(_LINES[number])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_LINES):
            terminalreporter.write_line(_LINES[number])
