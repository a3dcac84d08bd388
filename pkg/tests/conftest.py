import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "ran": False,
                                          "note": ""})
    if report.when == "call" or report.outcome != "passed":
        entry["ran"] = entry["ran"] or report.when == "call" or hasattr(report, "wasxfail")
        failed = report.outcome == "failed" or hasattr(report, "wasxfail")
        if report.skipped and not hasattr(report, "wasxfail"):
            entry["passed"] = False
            entry["note"] = "skipped"
        elif failed:
            entry["passed"] = False
            if hasattr(report, "wasxfail"):
                entry["note"] = "known failure: " + report.wasxfail


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["passed"] and entry["ran"] else "FAIL"
        note = f"  ({entry['note']})" if entry["note"] else ""
        terminalreporter.write_line(f"criterion {number:2d} {status}  {entry['title']}{note}")
