from fractions import Fraction

import pytest

from dirac.grading import GradedSet, is_odd, koszul_sign, spin_of


@pytest.mark.parametrize("d1,d2,sign", [(-1, -1, -1), (0, 7, 1), (-2, 3, 1), (3, 5, -1)])
def test_koszul_sign(d1, d2, sign):
    assert koszul_sign(d1, d2) == sign


@pytest.mark.parametrize("d,spin", [(0, 0), (2, -1), (-1, Fraction(1, 2)), (-3, Fraction(3, 2))])
def test_spin(d, spin):
    assert spin_of(d).value == spin


def test_spin_round_trip():
    for d in range(-7, 8):
        assert spin_of(d).degree() == d


def test_parity():
    assert is_odd(-1) and not is_odd(-2) and not is_odd(0)


def test_graded_set_lookup():
    G = GradedSet([("x", -1), ("y", -2)])
    assert G.names == ("x", "y")
    assert G.degree("y") == -2
    assert G.index("x") == 0
