from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

_criteria: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and not report.passed):
        verdict = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        notes = "; ".join(str(v) for k, v in report.user_properties if k == "note")
        _criteria.append((verdict, name, notes))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for verdict, name, notes in _criteria:
        line = f"{verdict:4} {name}"
        if notes:
            line += f"  [{notes}]"
        terminalreporter.write_line(line)


@pytest.fixture
def note(record_property):
    """Attach a one-line remark to the acceptance summary."""

    def add(text: str) -> None:
        record_property("note", text)
        print(text)

    return add
