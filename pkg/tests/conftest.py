from __future__ import annotations

import numpy as np
import pytest

from aleinfer.data import Dataset, load_csv
from aleinfer.fixtures import fixture_path

ACCEPTANCE_RESULTS: dict[str, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def linear_data() -> Dataset:
    return load_csv(fixture_path("linear"), "y")


@pytest.fixture(scope="session")
def nonlinear_data() -> Dataset:
    return load_csv(fixture_path("nonlinear"), "y")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    label = marker.args[0]
    status = "PASS" if call.excinfo is None else "FAIL"
    ACCEPTANCE_RESULTS[label] = (status, item.nodeid)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion check")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s[2:].split(" ")[0])):
        status, _ = ACCEPTANCE_RESULTS[label]
        terminalreporter.write_line(f"{status} {label}")
