from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_criteria = {}


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def demo_config():
    return FIXTURES / "demo" / "config.json"


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome == "failed":
        n, title = marker
        prev = _criteria.get(n, (title, True))
        _criteria[n] = (title, prev[1] and report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok = _criteria[n]
        terminalreporter.write_line(f"AC{n} {'PASS' if ok else 'FAIL'}  {title}")
