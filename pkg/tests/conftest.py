import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1000, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--long-run", action="store_true", default=False, help="run hour-scale reproductions")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: takes more than ~30 s")
    config.addinivalue_line("markers", "longrun: needs --long-run")
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long-run"):
        return
    skip = pytest.mark.skip(reason="needs --long-run")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)


# ---------------------------------------------------------------- acceptance summary

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    entry = _criteria.setdefault(n, {"title": title, "outcomes": [], "seconds": 0.0})
    entry["seconds"] += rep.duration
    if rep.when == "call" or rep.outcome != "passed":
        entry["outcomes"].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        outs = e["outcomes"]
        if "failed" in outs:
            status = "FAIL"
        elif outs and all(o == "skipped" for o in outs):
            status = "SKIP"
        else:
            status = "PASS"
        note = f", {outs.count('skipped')} long-run check(s) skipped" if status == "PASS" and "skipped" in outs else ""
        terminalreporter.write_line(f"criterion {n:2d} {status}  {e['title']}  [{e['seconds']:.1f} s{note}]")
