from fractions import Fraction
from functools import lru_cache

import pytest

from tia.fluid import Augmentation, build_fluid_algebra

# pass/fail lines written by test_acceptance, echoed at the end of the run
ACCEPTANCE_LINES = []


@lru_cache(maxsize=None)
def fluid(N, delta):
    return build_fluid_algebra(N, Augmentation(Fraction(delta)))


@pytest.fixture(scope="session")
def fluid3():
    return fluid(3, Fraction(1))


@pytest.fixture(scope="session")
def fluid4_half():
    return fluid(4, Fraction(1, 2))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
