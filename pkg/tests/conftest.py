import numpy as np
import pytest

from ustc.uncertain import UncertainDataset, UncertainSeries, UncertainValue


def U(best, delta=0.0):
    return UncertainValue(best, delta)


def series(best, delta=None):
    return UncertainSeries(best, delta)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def planted_toy():
    """Four series of length 8; class A carries [0, 5, 0]."""
    best = np.array(
        [
            [1.0, 1.0, 0.0, 5.0, 0.0, 1.0, 1.0, 1.0],
            [1.0, 0.0, 5.0, 0.0, 1.0, 1.0, 1.0, 1.0],
            [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            [2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0],
        ]
    )
    return UncertainDataset(best, np.zeros_like(best), ["A", "A", "B", "B"], "planted")


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
