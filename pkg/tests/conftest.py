import re

import numpy as np
import pytest

ACCEPTANCE_TITLES = {
    1: "spherical design certification",
    2: "unitary designs (Clifford, SL(2,F5))",
    3: "design sums vs Monte Carlo, Bell-diagonal closed forms",
    4: "closed-form golden values (W, GHZ)",
    5: "W-class criteria on sampled Conv(W) states",
    6: "noisy-GHZ thresholds and crossover",
    7: "two-qubit histogram moments",
    8: "simplex maximization vs closed form",
    9: "figure scans inside envelope, landmarks",
}

_outcomes: dict[int, list[str]] = {}
_notes: dict[int, list[str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_note(request):
    """Attach a one-line measurement to the acceptance summary."""
    match = re.search(r"criterion_(\d+)", request.node.name)

    def note(text: str) -> None:
        if match:
            _notes.setdefault(int(match.group(1)), []).append(text)

    return note


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::\w*criterion_(\d+)", report.nodeid)
    if not match:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes.setdefault(int(match.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in ACCEPTANCE_TITLES.items():
        results = _outcomes.get(number)
        if not results:
            status = "NOT RUN"
        elif all(r == "passed" for r in results):
            status = "PASS"
        else:
            status = "FAIL"
        line = f"criterion {number}: {status}  {title}"
        if _notes.get(number):
            line += "  [" + "; ".join(_notes[number]) + "]"
        terminalreporter.write_line(line)
