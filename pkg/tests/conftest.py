"""Shared orders and the per-criterion PASS/FAIL summary."""

import math

import pytest

from taunaf import build_digit_set, make_order


def grid_orders(qs=(2, 3, 4, 5)):
    for q in qs:
        r = math.isqrt(4 * q)
        for p in range(-r, r + 1):
            if p * p < 4 * q:
                yield p, q


GRID = list(grid_orders())
WIDTHS = (2, 3, 4)
SMALL = [(1, 2), (0, 2), (-1, 2), (3, 3), (1, 3), (0, 5), (2, 4)]


@pytest.fixture(scope="session")
def binary_naf():
    """The most used digit set: tau^2 - tau + 2, w = 2."""
    return build_digit_set(make_order(1, 2), 2)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criterion_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and (report.when == "call" or report.failed):
        results = item.config._criterion_results
        key = (marker.args[0], marker.args[1])
        results.setdefault(key, []).append(report.passed)


def pytest_terminal_summary(terminalreporter, config):
    results = config._criterion_results
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), outcomes in sorted(results.items()):
        status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {num:2d}: {title}")
