"""Terminal summary for the acceptance suite: after any run that
includes tests from test_acceptance.py, print one PASS/FAIL line per
acceptance criterion, regardless of output capturing."""

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    _ACCEPTANCE_RESULTS[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_ACCEPTANCE_RESULTS):
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{name}: {_ACCEPTANCE_RESULTS[nodeid]}")
