"""Shared test configuration.

Registers a deterministic hypothesis profile and prints one
``ACCEPTANCE <nn> <name>: PASS|FAIL`` line per criterion test at the end
of the run, so the acceptance block is stable and diffable.
"""

import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num, slug = int(m.group(1)), m.group(2).replace("_", "-")
    if report.when == "call":
        _results[num] = (slug, report.outcome == "passed")
    elif report.when == "setup" and report.outcome != "passed":
        _results[num] = (slug, False)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        slug, ok = _results[num]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {num:02d} {slug}: {verdict}")
