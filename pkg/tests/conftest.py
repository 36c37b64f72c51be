import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.register_profile("ci", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance criterion number -> [title, passed, detail, status]; filled by test_acceptance.py
CRITERIA: dict[int, list] = {}


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion for the summary table."""

    def record(number: int, title: str, passed: bool, detail: str = "", status: str | None = None):
        prev = CRITERIA.get(number)
        if prev is not None:
            passed = passed and prev[1]
            detail = "; ".join(x for x in (prev[2], detail) if x)
            status = status or prev[3]
        CRITERIA[number] = [title, passed, detail, status]
        return passed
    return record


def pytest_runtest_logreport(report):
    # a criterion whose test errored or failed after recording must not show as PASS
    if report.when == "call" and report.failed:
        for number, row in CRITERIA.items():
            if f"criterion_{number:02d}" in report.nodeid:
                row[1] = False


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, passed, detail, status = CRITERIA[number]
        if not passed:
            status = "FAIL"
        line = f"[{status or 'PASS'}] {number:2d}. {title}"
        if detail:
            line += f" ({detail})"
        tr.write_line(line)
