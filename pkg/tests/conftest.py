import random

import pytest

from fano_workbench.fields import GF, QQ
from fano_workbench.poly import poly_parse
from fano_workbench.varieties import Hypersurface, KPlane


@pytest.fixture
def f7():
    return GF(7)


@pytest.fixture
def quadric_surface(f7):
    """x0*x3 - x1*x2 in P^3, the doubly ruled quadric."""
    return Hypersurface(poly_parse("x0*x3-x1*x2", 4, f7))


@pytest.fixture
def worked_cubic(f7):
    """x0^2*x2 + x1^2*x3 + x2^3 + x3^3: a cubic surface containing V(x2,x3)."""
    return Hypersurface(poly_parse("x0^2*x2 + x1^2*x3 + x2^3 + x3^3", 4, f7))


@pytest.fixture
def line_v23(f7):
    """The line V(x2,x3) = span(e0, e1)."""
    return KPlane.from_rows(f7, [[1, 0, 0, 0], [0, 1, 0, 0]])


@pytest.fixture
def rng():
    return random.Random(20240817)
