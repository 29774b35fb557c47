import pytest

from dirac.exactlin import GF, QQ, ZZ
from dirac.freealg import FreeDiracAlgebra, apply_map, is_homogeneous, partial_derivative


@pytest.fixture
def odd2():
    return FreeDiracAlgebra(ZZ, [("x", -1), ("y", -1)])


def test_anticommuting(odd2):
    x, y = odd2.gens()
    assert y * x == -(x * y)


def test_unit(odd2):
    x, _ = odd2.gens()
    assert odd2.one() * x == x


def test_odd_square_is_two_torsion():
    F = FreeDiracAlgebra(ZZ, [("t", -1)])
    t = F.gen("t")
    assert (t * t).terms == {(2,): 1}
    assert (2 * (t * t)).is_zero()


def test_odd_square_vanishes_when_two_is_a_unit():
    F = FreeDiracAlgebra(GF(3), [("x", -1)])
    x = F.gen("x")
    assert (x * x).is_zero()


def test_homogeneity(odd2):
    x, y = odd2.gens()
    assert is_homogeneous(x * y) == -2
    assert is_homogeneous(x + x * y) == "inhomogeneous"
    assert is_homogeneous(odd2.zero()) == "zero"


def test_partials_of_xy(odd2):
    x, y = odd2.gens()
    assert partial_derivative(x * y, "x") == -y
    assert partial_derivative(x * y, "y") == x


def test_partials_even():
    F = FreeDiracAlgebra(GF(5), [("u", -2), ("t", -4)])
    u, t = F.gens()
    f = u * u - 2 * t
    assert partial_derivative(f, "u") == 2 * u
    assert partial_derivative(f, "t") == F.scalar(-2)


def test_apply_identity(odd2):
    x, y = odd2.gens()
    a = 3 * x * y + x
    assert apply_map([x, y], a, odd2) == a


def test_rendering_order():
    F = FreeDiracAlgebra(QQ, [("x", -2), ("y", -2)])
    x, y = F.gens()
    assert (y * y - x * y + x).render() == "-1*x^1*y^1 + 1*x^1 + 1*y^2"


def test_torsion_coefficient_normalized():
    F = FreeDiracAlgebra(ZZ, [("x", -1), ("y", -1)])
    x, y = F.gens()
    # x*y^2 is 2-torsion, so its coefficient is taken mod 2
    assert (-(x * y * y)).render() == "1*x^1*y^2"
