import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_criteria = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""

    def record(label):
        _criteria[request.node.nodeid] = label

    return record


def pytest_runtest_logreport(report):
    if report.when == "call" and report.nodeid in _criteria:
        verdict = "PASS" if report.passed else "FAIL"
        _criteria[report.nodeid] = f"[{verdict}] {_criteria[report.nodeid]}"


def pytest_terminal_summary(terminalreporter):
    lines = [v for v in _criteria.values() if v.startswith("[")]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
