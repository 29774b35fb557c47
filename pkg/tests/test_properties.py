"""Randomized algebraic identities."""
from hypothesis import given, settings, strategies as st

from dirac.exactlin import GF, QQ, ZZ, kernel_basis, matvec, quotient_invariants, rank, smith_form, solve_linear
from dirac.gmod import PresentedModule, minimal_generators, module_piece, tensor, twist
from dirac.grading import koszul_sign

from conftest import make

FAST = settings(max_examples=40, deadline=None)
SLOW = settings(max_examples=15, deadline=None)

Z3 = make(ZZ, [("x", -1), ("y", -2), ("z", -3)])


def monomial(A, coeff, exps):
    out = A.scalar(coeff)
    for g, e in zip(A.gens(), exps):
        for _ in range(e):
            out = out * g
    return out


terms = st.tuples(st.integers(-3, 3), st.tuples(*[st.integers(0, 2)] * 3))
homog = terms.map(lambda t: monomial(Z3, *t))
poly = st.lists(terms, max_size=3).map(lambda ts: sum((monomial(Z3, *t) for t in ts), Z3.zero()))


@FAST
@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9))
def test_koszul_sign_bilinear(a, b, c):
    assert koszul_sign(a, b) == koszul_sign(b, a)
    assert koszul_sign(a + b, c) == koszul_sign(a, c) * koszul_sign(b, c)


@FAST
@given(homog, homog)
def test_graded_commutativity(a, b):
    da, db = Z3.degree_of(a), Z3.degree_of(b)
    if not isinstance(da, int) or not isinstance(db, int):
        return
    ba = Z3.scale(koszul_sign(da, db), Z3.mul(b, a))
    assert Z3.equal(Z3.mul(a, b), ba)


@FAST
@given(poly, poly, poly)
def test_ring_axioms(a, b, c):
    assert Z3.equal((a * b) * c, a * (b * c))
    assert Z3.equal(a * (b + c), a * b + a * c)


def test_odd_squares():
    x = Z3.gen("x")
    assert not Z3.is_zero(x * x) and Z3.is_zero(Z3.scalar(2) * x * x)
    F = make(GF(3), [("x", -1)])
    assert F.is_zero(F.gen("x") * F.gen("x"))


mats = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@FAST
@given(mats, st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_integer_solve_and_kernel(m, x0):
    n = len(m[0])
    x0 = x0[:n]
    b = matvec(m, x0, ZZ)
    x = solve_linear(m, b, ZZ, cols=n)
    assert x is not None and matvec(m, x, ZZ) == b
    for v in kernel_basis(m, ZZ, cols=n):
        assert matvec(m, v, ZZ) == [0] * len(m)
    assert len(kernel_basis(m, ZZ, cols=n)) == n - rank(m, ZZ)


@FAST
@given(mats)
def test_invariants_match_smith(m):
    # rows of m are relations on Z^n
    n = len(m[0])
    inv = quotient_invariants(n, m, ZZ)
    d, _, _ = smith_form(m)
    nz = [abs(x) for x in d if x]
    assert inv.rank == n - len(nz)
    assert list(inv.torsion) == [x for x in nz if x != 1]


A3 = make(GF(3), [("x", -2)], lambda g: [g[0] ** 3])


def entry(A, c, gap):
    """c * x^k when gap == -2k, else zero."""
    if gap > 0 or gap % 2 or -gap // 2 > 2:
        return A.zero()
    return A.scalar(c) * A.gen("x") ** (-gap // 2)


modules = st.tuples(
    st.lists(st.sampled_from([0, -2]), min_size=1, max_size=3),
    st.lists(st.tuples(st.sampled_from([0, -2, -4]), st.lists(st.integers(0, 2), min_size=3, max_size=3)),
             max_size=3))


def build(spec):
    degs, rows = spec
    rels = [[entry(A3, cs[j], e - degs[j]) for j in range(len(degs))] for e, cs in rows]
    return PresentedModule(A3, degs, rels, [e for e, _ in rows]), degs, rows


@SLOW
@given(modules)
def test_nakayama(spec):
    M, degs, rows = build(spec)
    const = [[cs[j] % 3 if e == degs[j] else 0 for j in range(len(degs))] for e, cs in rows]
    expected = len(degs) - (rank(const, GF(3)) if const else 0)
    assert minimal_generators(M).count == expected


@SLOW
@given(modules, modules)
def test_tensor_symmetric_and_twist(s1, s2):
    M, N = build(s1)[0], build(s2)[0]
    for d in (0, -2, -4, -6):
        mn = module_piece(tensor(M, N), d).dim
        assert mn == module_piece(tensor(N, M), d).dim
        assert mn == module_piece(tensor(twist(M, 1), N), d - 2).dim
        assert module_piece(twist(M, 1), d - 2).dim == module_piece(M, d).dim
