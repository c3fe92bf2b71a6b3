"""Prints one PASS/FAIL line per acceptance criterion after the run."""

import re

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        num = int(m.group(1))
        outcome = "PASS" if report.outcome == "passed" else "FAIL"
        previous = _CRITERIA.get(num)
        if previous is None or previous[0] == "PASS":
            _CRITERIA[num] = (outcome, m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        outcome, name = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {outcome}  {name}")
