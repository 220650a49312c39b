import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

_criteria = {}   # nodeid -> criterion name
_results = {}    # criterion name -> list of (outcome, detail)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria[item.nodeid] = mark.args[0]


def pytest_runtest_logreport(report):
    name = _criteria.get(report.nodeid)
    if name is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if report.skipped:
            reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else ""
            reason = reason.removeprefix("Skipped: ")
            _results.setdefault(name, []).append(("SKIP", reason))
        else:
            _results.setdefault(name, []).append(("PASS" if report.passed else "FAIL", ""))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, outcomes in _results.items():
        kinds = {o for o, _ in outcomes}
        if "FAIL" in kinds:
            verdict = "FAIL"
        elif "PASS" in kinds:
            verdict = "PASS"
        else:
            verdict = "SKIP"
        detail = "; ".join(sorted({d for o, d in outcomes if o == "SKIP" and d}))
        suffix = f" ({detail})" if verdict == "SKIP" and detail else ""
        tr.write_line(f"{verdict}  {name}{suffix}")
