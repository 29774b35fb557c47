import json

import pytest

from dirac.descent import (CocycleError, DescentDatum, InvalidCover, ZariskiCover, amitsur_check, descend_module,
                           integer_cover_opens, opens_limit_check, totalization_agreement, truncated_integer_spec)
from dirac.exactlin import GF, ZZ
from dirac.gmod import PresentedModule

from conftest import make


@pytest.fixture
def zcover():
    return ZariskiCover(make(ZZ, []), [2, 3])


def test_cover_validation():
    Z = make(ZZ, [])
    with pytest.raises(InvalidCover):
        ZariskiCover(Z, [2, 4])
    A = make(ZZ, [("t", -1)])
    with pytest.raises(InvalidCover):
        ZariskiCover(A, [A.scalar(2) * A.gen("t") ** 2])


def test_odd_cover_element_squared():
    A = make(GF(2), [("x", -1)], lambda g: [g[0] ** 3])
    cv = ZariskiCover(A, [A.one(), A.gen("x")])
    assert cv.deltas == [0, -2]


def test_amitsur(zcover):
    assert amitsur_check(zcover, bound=2).status == "true"


@pytest.mark.parametrize("which", ["free2", "z6", "mixed"])
def test_trivial_round_trip(zcover, which):
    Z = zcover.algebra
    M = {"free2": PresentedModule.free(Z, [0, 0]),
         "z6": PresentedModule(Z, [0], [[Z.scalar(6)]], [0]),
         "mixed": PresentedModule(Z, [0, 0], [[Z.zero(), Z.scalar(2)]], [0])}[which]
    D = DescentDatum.trivial(zcover, M)
    r = descend_module(D, bound=4, candidate=M)
    assert r.module is M and r.report == ["verified"]
    assert totalization_agreement(D, [0], level=1) == {0: True}


def test_piece_invariants(zcover):
    Z = zcover.algebra
    D = DescentDatum.trivial(zcover, PresentedModule(Z, [0, 0], [[Z.zero(), Z.scalar(2)]], [0]))
    r = descend_module(D, bound=4)
    assert r.pieces[0] == "rank 1, torsion [2]"
    assert r.module.ngens == 2


def test_glued_by_units(zcover):
    Z = zcover.algebra
    F = PresentedModule.free(Z, [0])
    # g_01 = 2 on Z[1/6], g_10 = 3/6 = 1/2
    D = DescentDatum(zcover, [F, F], {(0, 1): ([[Z.scalar(2)]], 0), (1, 0): ([[Z.scalar(3)]], 1)})
    D.check_cocycle()
    r = descend_module(D, bound=4)
    assert r.module is not None and r.module.ngens == 1 and r.module.relation_matrix == []


def test_broken_cocycle(zcover):
    Z = zcover.algebra
    F = PresentedModule.free(Z, [0])
    D = DescentDatum(zcover, [F, F], {(0, 1): ([[Z.scalar(2)]], 0), (1, 0): ([[Z.scalar(2)]], 0)})
    with pytest.raises(CocycleError) as err:
        descend_module(D)
    assert err.value.triple == (0, 1, 0) and err.value.degree == 0


def test_graded_descent():
    A = make(GF(2), [("x", -1)], lambda g: [g[0] ** 3])
    cv = ZariskiCover(A, [A.one(), A.gen("x")])
    M = PresentedModule.cyclic(A, [A.gen("x") ** 2])
    D = DescentDatum.trivial(cv, M)
    assert descend_module(D, bound=8, candidate=M).module is M
    assert all(totalization_agreement(D, [0, -1, -2], level=1).values())


def test_wrong_candidate_reported(zcover):
    Z = zcover.algebra
    M = PresentedModule.free(Z, [0, 0])
    D = DescentDatum.trivial(zcover, M)
    r = descend_module(D, bound=4, candidate=PresentedModule.free(Z, [0]), maps=[lambda b: M.element([b[0], Z.zero()])] * 2)
    assert r.module is None and r.report[0]["onto"] is False


def test_json_has_cocycle(zcover):
    Z = zcover.algebra
    D = DescentDatum.trivial(zcover, PresentedModule.free(Z, [0]))
    js = json.loads(json.dumps(D.to_json()))
    assert js["cover"] == ["2", "3"]
    assert {(c["source"], c["target"]) for c in js["cocycle"]} == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_opens_limit_finite():
    A = make(GF(2), [("x", -1)], lambda g: [g[0] ** 3])
    assert opens_limit_check(A, cover=[A.one(), A.one()]).status == "true"


def test_opens_limit_integers():
    primes = [2, 3, 5]
    X = truncated_integer_spec(primes)
    opens = integer_cover_opens(primes, [2, 3])
    assert opens == [[0, 2, 3], [0, 1, 3]]
    assert opens_limit_check(X, opens).status == "true"
    # a non-cover is rejected
    assert opens_limit_check(X, [[0, 2, 3]]).status == "false"
