from dirac.exactlin import GF, QQ, ZZ
from dirac.presalg import (bounded_membership, elements_equal, graded_piece_basis, ideal_membership,
                           unit_ideal_certificate)

from conftest import make


def test_torsion_piece(zt):
    P = graded_piece_basis(zt, -2)
    assert P.rank == 0 and P.torsion == (2,)


def test_polynomial_piece(kx):
    P = graded_piece_basis(kx, -2)
    assert P.dim == 1 and P.basis == ((1,),)


def test_odd_square_piece(f3x_odd):
    assert graded_piece_basis(f3x_odd, -2).dim == 0


def test_membership_trivial(kx):
    x = kx.gen("x")
    cert = ideal_membership(x, kx, [x])
    assert cert is not None and kx.equal(cert[0], kx.one())


def test_non_membership():
    A = make(QQ, [("x", -2), ("y", -2)])
    assert ideal_membership(A.gen("y"), A, [A.gen("x")]) is None


def test_odd_sum_square():
    A = make(QQ, [("x", -1), ("y", -1)])
    x, y = A.gen("x"), A.gen("y")
    s = x + y
    # (x+y)^2 = x^2 + y^2 = 0 since xy + yx = 0 and 2 is a unit
    assert ideal_membership(s * s, A, [s]) is not None


def test_equalities(zt):
    t = zt.gen("t")
    assert elements_equal(3 * t * t, t * t, zt)
    B = make(QQ, [("x", -2)], lambda g: [g[0] ** 2])
    x = B.gen("x")
    assert elements_equal(x ** 3, B.zero(), B)


def test_unit_certificate():
    Z = make(ZZ, [])
    cert = unit_ideal_certificate([Z.scalar(2), Z.scalar(3)], Z)
    assert cert is not None
    total = sum(int(c.terms.get((), 0)) * v for c, v in zip(cert, (2, 3)))
    assert total == 1


def test_bounded_membership_finds_member(kx):
    x = kx.gen("x")
    assert bounded_membership(x ** 3, kx, [x], 8) is not None
