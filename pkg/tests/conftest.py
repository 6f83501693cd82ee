from fractions import Fraction

import pytest

from diophlab.constants import build_constants
from diophlab.exactreal import make_algebraic
from diophlab.minpoints import enumerate_minimal_points

SQRT2_M1 = ((-1, 2, 1), (0, 1))          # root of T^2 + 2T - 1 in (0,1)
QUARTIC_M1 = ((-1, 4, 6, 4, 1), (0, 1))  # root of (T+1)^4 - 2 in (0,1)


@pytest.fixture(scope="session")
def xi_sqrt2():
    return make_algebraic(*SQRT2_M1)


@pytest.fixture(scope="session")
def xi_quartic():
    return make_algebraic(*QUARTIC_M1)


@pytest.fixture(scope="session")
def consts():
    return build_constants()


@pytest.fixture(scope="session")
def records_n1_1e4(xi_sqrt2):
    return enumerate_minimal_points(xi_sqrt2, 1, x0_max=10 ** 4)


@pytest.fixture(scope="session")
def records_n3_1e4(xi_quartic):
    return enumerate_minimal_points(xi_quartic, 3, x0_max=10 ** 4)


@pytest.fixture(scope="session")
def records_n3_1e5(xi_quartic):
    return enumerate_minimal_points(xi_quartic, 3, x0_max=10 ** 5)


@pytest.fixture(scope="session")
def records_n1_1e6(xi_sqrt2):
    return enumerate_minimal_points(xi_sqrt2, 1, x0_max=10 ** 6)


@pytest.fixture(scope="session")
def records_n3_1e6(xi_quartic):
    return enumerate_minimal_points(xi_quartic, 3, x0_max=10 ** 6)


def assert_interval_le(lhs_fn, rhs_fn, start_width=Fraction(1, 2 ** 64), rounds=24):
    """Certify lhs <= rhs where both are width->Interval callables."""
    width = start_width
    for _ in range(rounds):
        a, b = lhs_fn(width), rhs_fn(width)
        if a.hi <= b.lo:
            return
        if a.lo > b.hi:
            raise AssertionError(f"certified violation: {a} > {b}")
        width /= 2 ** 8
    raise AssertionError("comparison stayed inconclusive")
