import numpy as np
import pytest

from utroots.unitriangular import UTMatrix

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="also run slow exhaustive checks (e.g. the 59049-element wreath product)")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if report.skipped:
            status = "SKIP"
        else:
            status = "PASS" if report.passed else "FAIL"
        prev = _CRITERIA.get(number, (title, "PASS"))[1]
        # a criterion spread over several tests fails if any part fails
        if prev == "FAIL" or status == "FAIL":
            status = "FAIL"
        elif prev == "PASS" and status == "SKIP" and number in _CRITERIA:
            status = "PASS"
        _CRITERIA[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number} [{status}] {title}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def example_a(a12: int, a13: int, a23: int) -> UTMatrix:
    return UTMatrix(3, [[1, a12, a13], [0, 1, a23], [0, 0, 1]])
