"""Collects the acceptance verdicts and prints them after the run."""

import pytest

_VERDICTS = []


@pytest.fixture
def verdict():
    """Record ``PASS``/``FAIL`` for a criterion, then assert it."""

    def record(label, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        _VERDICTS.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
