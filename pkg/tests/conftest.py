import math

import pytest

from widomkit.intervals import IntervalUnion
from widomkit.potential import build_potential

ACCEPTANCE_LINES: list[str] = []

B06 = IntervalUnion(((-1.0, -0.6), (0.6, 1.0)))
T2_B06 = (-2.125, 0.0, 3.125)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def arcsine():
    return build_potential(IntervalUnion(((-1.0, 1.0),)))


@pytest.fixture(scope="session")
def two_band():
    return build_potential(B06)


def green_interval(x: float) -> float:
    """Green function of [-1, 1] with pole at infinity."""
    return math.log(abs(x) + math.sqrt(x * x - 1.0))
