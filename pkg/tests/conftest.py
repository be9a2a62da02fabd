"""Shared fixtures and the acceptance summary printed after the run."""

import pytest

from ambigine.golden import load_example
from ambigine.serialization import parse_body

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = _CRITERIA.get(report.nodeid)
    if marker is not None:
        number, title = marker
        passed = report.passed if report.when == "call" else False
        _CRITERIA[report.nodeid] = (number, title, passed, report.duration)


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            _CRITERIA[item.nodeid] = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    rows = sorted(v for v in _CRITERIA.values() if len(v) == 4)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, duration in rows:
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}  ({duration:.2f}s)")


def _instance(example):
    doc = load_example(example)
    return parse_body(doc["kind"], doc["body"]), doc


@pytest.fixture
def example1():
    return _instance("1")


@pytest.fixture
def example2():
    return _instance("2")


@pytest.fixture
def example5():
    return _instance("5")


@pytest.fixture
def example6():
    return _instance("6")
