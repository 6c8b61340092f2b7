import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# nodeid -> (criterion number, title, outcome)
_ACCEPTANCE: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _ACCEPTANCE[item.nodeid] = [m.args[0], m.args[1], "not run"]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.nodeid not in _ACCEPTANCE:
        return
    entry = _ACCEPTANCE[item.nodeid]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry[2] = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, res in sorted(_ACCEPTANCE.values()):
        terminalreporter.write_line(f"[{res:>4}] criterion {n:2d}: {title}")
