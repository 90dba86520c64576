import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"

sys.path.insert(0, str(Path(__file__).resolve().parent))

_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line; returns the ``ok`` flag for asserting."""

    def record(label, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
