import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from v6taxon.addr_core import parse_address  # noqa: E402


@pytest.fixture
def worked_pair():
    return [parse_address("2001:db8::1"), parse_address("2001:db8::4")]


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criteria")


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        _criteria[name] = (report.passed and _criteria.get(name, (True, 0))[0], report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, duration) in sorted(_criteria.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({duration:.2f}s)")
