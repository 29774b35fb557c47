from dirac.calculus import (etale_certificate, even_generators, flatness_of_map, is_even_map, is_standard_smooth,
                            is_unramified, jacobian, kaehler, multiplication_tor, relative_presentation)
from dirac.exactlin import GF, QQ, ZZ
from dirac.rings import AlgebraMap, DiracField, field_extension_map, identity_map, localization_map

from conftest import make


def test_free_omega_basis():
    A = make(QQ, [])
    B = make(QQ, [("x", -2), ("y", -1)])
    K = kaehler(AlgebraMap(A, B, []))
    assert K.ngens == 2 and K.relation_matrix == []
    assert K.differential_names == ["dx", "dy"]


def test_exterior_omega_nonzero():
    k = make(QQ, [])
    ke = make(QQ, [("e", -1)])
    phi = AlgebraMap(k, ke, [])
    assert is_unramified(phi).status == "false"
    assert etale_certificate(phi).status == "not_etale"


def test_jacobian_rows():
    A = make(QQ, [])
    B = make(QQ, [("x", -1), ("y", -1)], lambda g: [g[0] * g[1]])
    pres = relative_presentation(AlgebraMap(A, B, []))
    J = jacobian(pres)
    x, y = B.gen("x"), B.gen("y")
    assert B.equal(J[0][0], B.neg(y)) and B.equal(J[0][1], x)


def test_jacobian_empty():
    A = make(QQ, [])
    B = make(QQ, [("x", -2)])
    assert jacobian(relative_presentation(AlgebraMap(A, B, []))) == []


def test_standard_smooth():
    k = make(QQ, [])
    assert is_standard_smooth(AlgebraMap(k, make(QQ, [("x", -2)]), [])).status == "true"
    dual = make(QQ, [("x", -2)], lambda g: [g[0] ** 2])
    assert is_standard_smooth(AlgebraMap(k, dual, [])).status == "false"


def test_localization_certified(kx):
    phi = localization_map(kx, kx.gen("x"))
    assert is_standard_smooth(relative_presentation(phi)).status == "true"
    assert is_unramified(phi).status == "true"
    assert etale_certificate(phi).witness == {"via": "localization"}
    assert is_even_map(phi).status == "even"
    assert flatness_of_map(phi).status != "not_flat"


def test_identity_unramified(kx):
    phi = identity_map(kx)
    assert is_unramified(phi).status == "true"
    assert is_even_map(phi).status == "even"


def test_field_extension_certificate():
    K = DiracField(GF(5), ("t", -4))
    L = DiracField(GF(5), ("u", -2))
    phi = field_extension_map(K, L, 3, 2)
    assert etale_certificate(phi).witness == {"via": "field_extension(e=2)"}
    assert is_even_map(phi).status == "even"


def test_beta_extension():
    phi = field_extension_map(DiracField(GF(3), ("s", -8)), DiracField(GF(3), ("b", -2)), 1, 4)
    assert etale_certificate(phi).status == "etale"


def test_odd_polynomial_not_even():
    k = make(QQ, [])
    B = make(QQ, [("x", -1)])
    v = is_even_map(AlgebraMap(k, B, []))
    assert v.status == "not_even" and v.witness["degree"] == -1


def test_even_generators_integers():
    A = make(ZZ, [("x", -1), ("y", -1)])
    gens = sorted(A.render(g) for g in even_generators(A))
    assert gens == ["1*x^1*y^1", "1*x^2", "1*y^2"]


def test_even_generators_two_invertible():
    A = make(GF(3), [("x", -1), ("y", -1)])
    assert [A.render(g) for g in even_generators(A)] == ["1*x^1*y^1"]


def test_even_generators_even_algebra(kx):
    assert [kx.render(g) for g in even_generators(kx)] == ["1*x^1"]


def test_multiplication_tor_vanishes_for_localization(kx):
    phi = localization_map(kx, kx.gen("x"))
    assert all(v.is_zero() for v in multiplication_tor(phi, range(-4, 5)).values())


def test_multiplication_tor_detects_polynomial_extension():
    # k -> k[y] is smooth but not unramified; the diagonal is not flat
    k = make(QQ, [])
    B = make(QQ, [("y", -2)])
    tors = multiplication_tor(AlgebraMap(k, B, []), range(-4, 1))
    assert any(not v.is_zero() for v in tors.values())


def test_smooth_not_flat_over_integers():
    Z = make(ZZ, [])
    B = make(ZZ, [("t", -1)])
    phi = AlgebraMap(Z, B, [])
    assert is_standard_smooth(relative_presentation(phi)).status == "true"
    assert flatness_of_map(phi).status == "not_flat"
