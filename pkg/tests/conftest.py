import numpy as np
import pytest

from toda_polytope.builtin import example_pair


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def hexagon():
    return example_pair("hexagon")


@pytest.fixture
def quadrilateral():
    return example_pair("quadrilateral")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
