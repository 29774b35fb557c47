import pytest

from dirac.exactlin import GF, QQ, ZZ
from dirac.presalg import PresentedAlgebra


def make(base, gens, rels=lambda g: []):
    A = PresentedAlgebra.free_on(base, gens)
    r = rels(A.gens())
    return A.quotient(r) if r else A


@pytest.fixture
def zt():
    return make(ZZ, [("t", -1)])


@pytest.fixture
def kx():
    return make(QQ, [("x", -2)])


@pytest.fixture
def f3x_odd():
    return make(GF(3), [("x", -1)])
