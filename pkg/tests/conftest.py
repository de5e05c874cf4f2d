"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import re

_outcomes: dict[int, tuple[str, str]] = {}
_CRITERION = re.compile(r"test_acceptance\.py::test_ac(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    number, label = int(m.group(1)), m.group(2).replace("_", " ")
    previous = _outcomes.get(number, (label, "PASS"))[1]
    failed = report.failed or previous == "FAIL"
    if report.when == "call" or report.failed:
        _outcomes[number] = (label, "FAIL" if failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        label, verdict = _outcomes[number]
        terminalreporter.write_line(f"criterion {number:2d} {verdict}: {label}")
