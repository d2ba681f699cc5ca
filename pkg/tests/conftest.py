import os
import sys

from hypothesis import HealthCheck, settings

# keep the suite runnable from a plain checkout as well as an editable install
sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

settings.register_profile(
    "exact",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


# one summary line per acceptance criterion, whatever the capture mode
_criteria: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        key = int(name.split("_")[2])
        _criteria[key] = (report.outcome == "passed", name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        ok, name = _criteria[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {name}")
