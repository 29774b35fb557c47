import pytest

from dirac.exactlin import GF, QQ, ZZ
from dirac.gmod import (ModuleMap, PresentedModule, RestrictedModule, direct_sum, equational_factor,
                        evenness_status, flatness_status, minimal_generators, module_piece, residue_module,
                        tensor, tor1, twist)
from dirac.rings import AlgebraMap, Localization

from conftest import make


def test_free_module_torsion_piece(zt):
    F = PresentedModule.free(zt, [0])
    assert module_piece(F, -2).torsion == (2,)


def test_zero_module():
    A = make(QQ, [("x", -2)])
    Z = PresentedModule(A, [0], [[A.one()]], [0])
    assert all(module_piece(Z, d).is_zero() for d in range(-6, 1))
    assert minimal_generators(Z).count == 0


def test_cyclic_quotient_piece(kx):
    k = residue_module(kx)
    assert module_piece(k, -2).dim == 0
    assert module_piece(k, 0).dim == 1


def test_minimal_generators_mixed():
    A = make(GF(2), [("x", -1)], lambda g: [g[0] ** 3])
    M = direct_sum(PresentedModule.free(A, [0]), PresentedModule.cyclic(A, [A.gen("x")]))
    assert minimal_generators(M).count == 2


def test_minimal_generators_free_rank():
    A = make(GF(3), [("x", -2)])
    assert minimal_generators(PresentedModule.free(A, [0, -2, -4])).count == 3


def test_minimal_generators_drop_redundant():
    A = make(QQ, [("x", -2)])
    x = A.gen("x")
    # second generator equals x times the first
    M = PresentedModule(A, [0, -2], [[x, A.scalar(-1)]], [-2])
    mg = minimal_generators(M)
    assert mg.count == 1 and mg.degrees == (0,)


def test_tor_koszul(kx):
    k = residue_module(kx)
    dims = {d: tor1(k, k, d).rank for d in range(-6, 1)}
    assert dims == {-6: 0, -5: 0, -4: 0, -3: 0, -2: 1, -1: 0, 0: 0}


def test_tor_integers():
    Z = make(ZZ, [])
    Z2 = PresentedModule.cyclic(Z, [Z.scalar(2)])
    inv = tor1(Z2, Z2, 0)
    assert inv.rank == 0 and inv.torsion == (2,)


def test_tor_of_free_vanishes(kx):
    k = residue_module(kx)
    F = PresentedModule.free(kx, [0, -2])
    assert all(tor1(F, k, d).is_zero() for d in range(-6, 1))


def test_flatness_basic(kx):
    assert flatness_status(PresentedModule.free(kx, [0, 3])).status == "flat"
    assert flatness_status(residue_module(kx)).status == "not_flat"


def test_flatness_witness_polynomial_over_integers():
    Z = make(ZZ, [])
    B = make(ZZ, [("t", -1)])
    v = flatness_status(RestrictedModule(AlgebraMap(Z, B, [])))
    assert v.status == "not_flat" and v.witness == {"degree": -2, "torsion": [2]}


def test_equational_factor_none(kx):
    k = residue_module(kx)
    F = PresentedModule.free(kx, [0])
    a = ModuleMap(PresentedModule.free(kx, [-2]), F, [[kx.gen("x")]])
    assert equational_factor(a, ModuleMap(F, k, [k.gen(0)])).status == "none"


def test_equational_factor_zero_relation(kx):
    M = PresentedModule.free(kx, [0])
    F = PresentedModule.free(kx, [0])
    a = ModuleMap(PresentedModule.free(kx, [0]), F, [[kx.zero()]])
    r = equational_factor(a, ModuleMap(F, M, [M.gen(0)]))
    assert r.found


def test_equational_factor_localization_verified(kx):
    x = kx.gen("x")
    L = Localization(kx, x)
    ML = RestrictedModule(AlgebraMap(kx, L, [L.gen("x")]))
    F = PresentedModule.free(kx, [2, 0])
    a = ModuleMap(PresentedModule.free(kx, [0]), F, [[x, kx.scalar(-1)]])
    xx = ModuleMap(F, ML, [L.element(kx.one(), 1), L.one()])
    r = equational_factor(a, xx)
    assert r.found
    # b o a = 0 and y o b = x on generators
    for row in a.images:
        img = r.b.apply(row)
        assert r.middle.is_zero(img)
    for j in range(F.ngens):
        assert ML.is_zero(ML.add(r.y.apply(r.b.images[j]), ML.neg(xx.images[j])))


def test_evenness():
    Ao = make(QQ, [("x", -1)])
    assert evenness_status(residue_module(Ao)).status == "evenly_generated_only"
    assert evenness_status(PresentedModule.free(Ao, [-1])).status == "not_evenly_generated"
    Ae = make(QQ, [("x", -2)])
    assert evenness_status(residue_module(Ae)).status == "evenly_presented"


def test_twist_shifts_degrees(kx):
    M = PresentedModule.free(kx, [0])
    T = twist(M, 1)
    assert list(T.generator_degrees) == [-2]


def test_tensor_of_quotients(kx):
    k = residue_module(kx)
    T = tensor(k, k)
    assert module_piece(T, 0).dim == 1 and module_piece(T, -2).dim == 0


def test_module_map_check_rejects_bad_image(kx):
    k = residue_module(kx)
    F = PresentedModule.free(kx, [0])
    with pytest.raises(ValueError):
        # x does not go to zero in F under the identity on generators
        ModuleMap(k, F, [F.gen(0)])
