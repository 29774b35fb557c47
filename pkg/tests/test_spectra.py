import itertools

import pytest

from dirac.acceptance import finite_corpus

from dirac.exactlin import GF, QQ, ZZ
from dirac.rings import AlgebraMap, DiracField, Localization
from dirac.spectra import (GradedPrimeIdeal, _FiniteView, NotFinite, classify_dirac_field, fraction, fraction_equal,
                           integral_certificate, orbit_space_check, quasi_finite_fiber, residue_field,
                           sheaf_cover_check, spec_finite, spec_special, unit_certificate)

from conftest import make


def test_classify_prime_field():
    c = classify_dirac_field(make(GF(5), []))
    assert isinstance(c, DiracField) and c.gen is None


def test_classify_laurent():
    A = make(GF(5), [("u", -2)])
    c = classify_dirac_field(Localization(A, A.gen("u")))
    assert isinstance(c, DiracField) and c.gen == ("u", -2)


def test_classify_odd_char_two():
    A = make(GF(2), [("u", -1)])
    c = classify_dirac_field(Localization(A, A.gen("u")))
    assert isinstance(c, DiracField) and c.gen == ("u", -1)


def test_classify_rejects():
    assert classify_dirac_field(make(ZZ, [])).status == "not_a_dirac_field"
    A = make(GF(3), [("x", -2)], lambda g: [g[0] ** 2])
    v = classify_dirac_field(A)
    assert v.status == "not_a_dirac_field" and v.witness["reason"] == "nilpotent of nonzero degree"
    B = make(QQ, [("x", -2), ("e", -1)])
    v = classify_dirac_field(Localization(B, B.gen("x")))
    assert v.status == "not_a_dirac_field"


def test_fraction_equality_torsion(zt):
    t = zt.gen("t")
    L = Localization(zt, t)
    # t is odd over Z so 2t = 0 and 2/1 = 2t/t = 0
    assert fraction_equal(L, (zt.scalar(2), 0), (zt.zero(), 0))
    assert not fraction_equal(L, (zt.one(), 0), (zt.zero(), 0))


def test_fraction_equal_cross_denominators(kx):
    x = kx.gen("x")
    L = Localization(kx, x)
    assert fraction_equal(L, fraction(L, x, 1), fraction(L, kx.one(), 0))
    assert not fraction_equal(L, fraction(L, x, 0), fraction(L, kx.one(), 0))


def test_spec_odd_generator(f3x_odd):
    S = spec_finite(f3x_odd)
    assert [p.render() for p in S.points] == ["(1*x^1)"]


def test_spec_truncated():
    A = make(GF(2), [("x", -1)], lambda g: [g[0] ** 3])
    S = spec_finite(A)
    assert [p.render() for p in S.points] == ["(1*x^1)"]
    assert S.to_json()["specializations"] == []


def test_spec_two_generators():
    A = make(GF(3), [("x", -2), ("y", -2)], lambda g: [g[0] ** 2, g[1] ** 2])
    S = spec_finite(A)
    assert len(S.points) == 1 and len(S.points[0].generators) == 2


def test_spec_finite_rejects_infinite(kx):
    with pytest.raises(NotFinite):
        spec_finite(kx)


def test_sierpinski():
    S = spec_special(make(GF(3), [("x", -2)]))
    js = S.to_json()
    assert [p["ideal"] for p in js["points"]] == ["(0)", "(1*x^1)"]
    assert js["specializations"] == [[0, 1]]
    assert js["opens"] == {"1": [0, 1], "1*x^1": [0]}
    assert S.generic_points() == [0]


def test_spec_of_field_is_point():
    S = spec_special(DiracField(GF(5), ("u", -2)))
    assert len(S.points) == 1 and S.points[0].render() == "(0)"


def test_residue_fields():
    A = make(GF(3), [("t", -2)])
    S = spec_special(A)
    assert residue_field(A, S.points[0]).gen == ("t", -2)
    assert residue_field(A, S.points[1]).gen is None


def test_quasi_finite():
    k = make(QQ, [])
    assert quasi_finite_fiber(AlgebraMap(k, make(QQ, [("x", -2)]), [])).status == "infinite"
    v = quasi_finite_fiber(AlgebraMap(k, make(QQ, [("e", -1)]), []))
    assert v.status == "finite" and v.witness == {"dim": 2}
    A = make(QQ, [("x", -2)])
    v = quasi_finite_fiber(AlgebraMap(A, A, [A.gen("x")]), GradedPrimeIdeal((A.gen("x"),), A))
    assert v.status == "finite" and v.witness == {"dim": 1}


def test_integral_certificate():
    A = make(QQ, [("a", -4)])
    B = make(QQ, [("x", -2)])
    x = B.gen("x")
    phi = AlgebraMap(A, B, [x * x])
    cert = integral_certificate(x, phi)
    assert cert.degree == 2 and cert.render() == "X^2 + (-1*x^2)"
    k = make(QQ, [])
    assert integral_certificate(x, AlgebraMap(k, B, []), bound=4) is None


def test_unit_certificate(zt):
    Z = make(ZZ, [])
    c = unit_certificate(Z, [Z.scalar(2), Z.scalar(3)])
    assert Z.equal(Z.add(Z.mul(c[0], Z.scalar(2)), Z.mul(c[1], Z.scalar(3))), Z.one())
    assert unit_certificate(Z, [Z.scalar(2), Z.scalar(4)]) is None


def test_sheaf_cover():
    Z = make(ZZ, [])
    assert sheaf_cover_check(Z, [2, 3], bound=2).status == "true"
    A = make(GF(3), [("x", -2)], lambda g: [g[0] ** 3])
    assert sheaf_cover_check(A, [A.one(), A.gen("x")], bound=8).status == "true"
    with pytest.raises(ValueError):
        sheaf_cover_check(Z, [2, 4])


def test_orbit_space():
    A = make(GF(3), [("x", -2)], lambda g: [g[0] ** 2])
    v = orbit_space_check(A)
    assert v.status == "true" and v.witness == {"ungraded_primes": 1, "graded_primes": 1}
    v = orbit_space_check(DiracField(GF(3), ("t", -2)), bound=2)
    assert v.status == "true" and v.witness["graded_primes"] == 1
    # monic irreducibles over F_3 of degree <= 2 other than t: 2 linear, 3 quadratic
    assert v.witness["ungraded_primes"] == 6


def _nilpotent(A, x, n=8):
    y = x
    for _ in range(n):
        if A.is_zero(y):
            return True
        y = y * x
    return False


@pytest.mark.parametrize("A", finite_corpus(), ids=repr)
def test_primes_cut_out_nilradical(A):
    S = spec_finite(A)
    view = _FiniteView(A)
    for d, v in view.homogeneous():
        x = view.element(d, v)
        in_all = all(I.contains(d, v) for I in S._ideals)
        assert in_all == _nilpotent(A, x)


@pytest.mark.parametrize("A", finite_corpus(), ids=repr)
def test_opens_cover_iff_unit_ideal(A):
    cands = [A.one()] + list(A.gens())
    for fs in itertools.combinations(cands, 2):
        S = spec_finite(A, opens=list(fs))
        covered = set().union(*(S.opens[A.render(f)] for f in fs))
        assert (covered == set(S.ids())) == (unit_certificate(A, list(fs)) is not None)
