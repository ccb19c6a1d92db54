import pytest

from oemsim.harness.scenarios import DEFAULT_BASELINE, scenario_fig3


@pytest.fixture
def baseline():
    return DEFAULT_BASELINE


@pytest.fixture
def one_pair_config():
    """Single 9 GHz pair at delta_w = +-0.5 omega_m."""
    return DEFAULT_BASELINE.system([DEFAULT_BASELINE.omega_w])


@pytest.fixture
def two_pair_config():
    return DEFAULT_BASELINE.system([DEFAULT_BASELINE.omega_w] * 2)


@pytest.fixture
def fig3_config():
    return scenario_fig3().base_config


# --- per-criterion summary for tests/test_acceptance.py -------------------

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.when == "call" or report.outcome == "failed":
        ok = report.outcome == "passed"
        _criteria.setdefault(crit, []).append((report.nodeid.split("::")[-1], ok))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_criteria):
        results = _criteria[crit]
        verdict = "PASS" if all(ok for _, ok in results) else "FAIL"
        failed = [name for name, ok in results if not ok]
        extra = f"  (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {crit:2d}: {verdict}{extra}")
