"""Dirac fields, localizations and graded prime spectra."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .exactlin import BaseRing, in_span, preimage, rref, solve_linear, span_basis
from .freealg import DegreeMismatch, Element, FreeDiracAlgebra, is_homogeneous
from .gmod import UnsupportedClass, Verdict
from .presalg import PresentedAlgebra
from .rings import AlgebraMap, DiracField, Localization, LocElement, PieceNotFinite, inverse, ring_of

__all__ = [
    "DiracField", "GradedPrimeIdeal", "SpecSpace", "NotFinite", "classify_dirac_field", "localize",
    "fraction", "fraction_equal", "spec_finite", "spec_special", "residue_field", "quasi_finite_fiber",
    "integral_certificate", "sheaf_cover_check", "orbit_space_check", "unit_certificate",
    "nilpotency_exponents", "finite_degrees", "even_subalgebra_map",
]


class NotFinite(ValueError):
    pass


# finiteness

def nilpotency_exponents(A: PresentedAlgebra, max_power: int = 64) -> Optional[list[int]]:
    """For each generator the least n with x^n = 0, or None if some generator survives max_power."""
    out = []
    for x in A.gens():
        p = x
        for n in range(1, max_power + 1):
            if A.is_zero(p):
                out.append(n)
                break
            p = p * x
        else:
            return None
    return out


def finite_degrees(A: PresentedAlgebra, max_power: int = 64) -> list[int]:
    """Degrees with a nonzero piece, for a finite algebra."""
    if not A.base.is_field:
        raise NotFinite(f"{A!r} is not finite over its base")
    exps = nilpotency_exponents(A, max_power)
    if exps is None:
        raise NotFinite(f"{A!r} has a non-nilpotent generator")
    lo = sum((n - 1) * d for n, d in zip(exps, A.free.degrees) if d < 0)
    hi = sum((n - 1) * d for n, d in zip(exps, A.free.degrees) if d > 0)
    return [d for d in range(lo, hi + 1) if not A.piece(d).is_zero()]


# classification

def classify_dirac_field(R, window: int = 12) -> Union[DiracField, Verdict]:
    """The field datum of R, or a "not a Dirac field" verdict carrying a witness."""
    if isinstance(R, DiracField):
        return R
    if isinstance(R, PresentedAlgebra):
        if not R.base.is_field:
            return Verdict("not_a_dirac_field", {"element": "2", "reason": "non-unit scalar"})
        if R.piece(0).is_zero():
            return Verdict("not_a_dirac_field", {"reason": "zero ring"})
        if not R.free.ngens:
            return DiracField(R.base)
        try:
            degs = finite_degrees(R)
        except NotFinite:
            for x in R.gens():
                if inverse(R, x) is None:
                    return Verdict("not_a_dirac_field", {"element": str(x), "reason": "non-unit"})
            raise UnsupportedClass("cannot classify this algebra")
        for d in degs:
            if d != 0:
                w = R.graded_piece_basis(d).basis[0]
                return Verdict("not_a_dirac_field",
                               {"element": str(R.free.monomial(w)), "reason": "nilpotent of nonzero degree"})
        return DiracField(R.base)
    if isinstance(R, Localization):
        return _classify_localization(R, window)
    raise UnsupportedClass(f"cannot classify {R!r}")


def _classify_localization(L: Localization, window: int) -> Union[DiracField, Verdict]:
    if not L.base.is_field:
        return Verdict("not_a_dirac_field", {"reason": "non-field base"})
    p0 = L.piece(0)
    if p0.is_zero():
        return Verdict("not_a_dirac_field", {"reason": "zero ring"})
    if p0.invariants().rank != 1:
        return Verdict("not_a_dirac_field", {"degree": 0, "reason": "degree-0 part is not the base field"})
    first = None
    for d in range(1, window + 1):
        for s in (d, -d):
            p = L.piece(s)
            dim = p.invariants().rank
            if dim > 1:
                return Verdict("not_a_dirac_field", {"degree": s, "reason": "piece of dimension > 1"})
            if dim == 1 and first is None:
                first = s
    if first is None:
        return DiracField(L.base)
    p = L.piece(first)
    u = next(b for b in p.spanning if not p.element_is_zero(b))
    if inverse(L, u) is None:
        return Verdict("not_a_dirac_field", {"element": L.render(u), "reason": "non-unit"})
    for s in range(-window, window + 1):
        if s % first and not L.piece(s).is_zero():
            return Verdict("not_a_dirac_field", {"degree": s, "reason": "piece off the period"})
    name = L.alg.free.names[0] if L.alg.free.ngens == 1 else "t"
    d = first if first < 0 else -first
    return DiracField(L.base, (name, d))


# localization

def localize(alg, f) -> Localization:
    R = ring_of(alg)
    if not isinstance(R, PresentedAlgebra):
        raise UnsupportedClass("localize expects a presented algebra")
    f = R.coerce(f)
    if is_homogeneous(f) == "inhomogeneous":
        raise DegreeMismatch(f"{f} is not homogeneous")
    return Localization(R, f)


def fraction(L: Localization, a: Element, m: int = 0) -> LocElement:
    """The fraction a / f^m."""
    if L.g is L.f or m == 0:
        return LocElement(L, a, m)
    return LocElement(L, a * L.f ** m, m)


def fraction_equal(L: Localization, x, y) -> bool:
    """Whether two fractions agree.  x and y are (numerator, exponent) pairs or LocElements."""
    if not isinstance(x, LocElement):
        x = fraction(L, *x)
    if not isinstance(y, LocElement):
        y = fraction(L, *y)
    return L.equal(x, y)


# graded ideals of finite rings

class _FiniteView:
    """Degreewise bases of a finite algebra, optionally restricted to even degrees."""

    def __init__(self, A: PresentedAlgebra, even: bool = False):
        self.A = A
        self.base = A.base
        if not self.base.is_field or self.base.kind != "F":
            raise NotFinite("finite spectra need a prime field")
        degs = finite_degrees(A)
        self.degrees = [d for d in degs if not (even and d % 2)]
        self.basis = {}
        for d in self.degrees:
            gp = A.graded_piece_basis(d)
            self.basis[d] = [A.free.monomial(m) for m in gp.basis]

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, []))

    def coords(self, d: int, x: Element) -> tuple:
        """Coordinates of x in the quotient basis of degree d."""
        p = self.A.piece(d)
        cols = [p.dense(b.terms) for b in self.basis[d]] + p.columns()
        n = len(p.coords)
        m = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
        sol = solve_linear(m, p.dense(p.vector(x)), self.base, cols=len(cols))
        return tuple(sol[:len(self.basis[d])])

    def element(self, d: int, v: Sequence) -> Element:
        out = self.A.zero()
        for c, b in zip(v, self.basis[d]):
            if c:
                out = out + self.A.scalar(c) * b
        return out

    def vectors(self, d: int):
        p = self.base.p
        for v in itertools.product(range(p), repeat=self.dim(d)):
            yield v

    def homogeneous(self):
        """One representative per line of nonzero homogeneous elements."""
        for d in self.degrees:
            for v in self.vectors(d):
                nz = [c for c in v if c]
                if nz and nz[0] == 1:
                    yield d, v


class _GradedIdeal:
    """Per-degree subspaces, stored as reduced row bases."""

    def __init__(self, view: _FiniteView, spaces: dict):
        self.view = view
        self.spaces = {d: s for d, s in spaces.items() if s}

    @property
    def key(self) -> tuple:
        return tuple((d, tuple(map(tuple, self.spaces[d]))) for d in sorted(self.spaces))

    def contains(self, d: int, v: Sequence) -> bool:
        if not any(v):
            return True
        rows = self.spaces.get(d)
        if not rows:
            return False
        return in_span(list(v), rows, self.view.base)

    def subset(self, other: "_GradedIdeal") -> bool:
        return all(other.contains(d, r) for d, rows in self.spaces.items() for r in rows)

    def is_proper(self) -> bool:
        return not self.contains(0, self.view.coords(0, self.view.A.one())) if 0 in self.view.basis else True


def _close(view: _FiniteView, spaces: dict) -> _GradedIdeal:
    """Smallest graded ideal (for the viewed subring) containing the given subspaces."""
    base = view.base
    A = view.A
    cur = {d: [list(r) for r in rows] for d, rows in spaces.items()}
    queue = [(d, list(r)) for d, rows in cur.items() for r in rows]
    cur = {d: span_basis(rows, view.dim(d), base) for d, rows in cur.items()}
    while queue:
        d, v = queue.pop()
        x = view.element(d, v)
        for e in view.degrees:
            t = d + e
            if t not in view.basis:
                continue
            for b in view.basis[e]:
                w = list(view.coords(t, b * x))
                if not any(w):
                    continue
                rows = cur.get(t, [])
                if rows and in_span(w, rows, base):
                    continue
                cur[t] = span_basis(rows + [w], view.dim(t), base)
                queue.append((t, w))
    return _GradedIdeal(view, cur)


def _all_graded_ideals(view: _FiniteView, cap: int = 4096) -> list[_GradedIdeal]:
    """Every graded ideal, reached by adding one homogeneous generator at a time."""
    gens = list(view.homogeneous())
    zero = _GradedIdeal(view, {})
    seen = {zero.key: zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for I in frontier:
            for d, v in gens:
                if I.contains(d, v):
                    continue
                sp = {e: list(r) for e, r in I.spaces.items()}
                sp[d] = sp.get(d, []) + [list(v)]
                J = _close(view, sp)
                if J.key not in seen:
                    seen[J.key] = J
                    nxt.append(J)
                    if len(seen) > cap:
                        raise NotFinite("too many graded ideals to enumerate")
        frontier = nxt
    return list(seen.values())


def _is_prime(I: _GradedIdeal) -> bool:
    view = I.view
    if not I.is_proper():
        return False
    outside = [(d, v) for d, v in view.homogeneous() if not I.contains(d, v)]
    for (d1, v1), (d2, v2) in itertools.combinations_with_replacement(outside, 2):
        t = d1 + d2
        if t not in view.basis:
            return False  # the product vanishes, so it lies in I
        prod = view.element(d1, v1) * view.element(d2, v2)
        if I.contains(t, view.coords(t, prod)):
            return False
    return True


@dataclass
class GradedPrimeIdeal:
    generators: tuple
    ring: object = field(repr=False, default=None)
    spaces: Optional[dict] = field(repr=False, default=None)

    def render(self) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __str__(self) -> str:
        return self.render()


def _minimal_generators(I: _GradedIdeal) -> tuple:
    view = I.view
    chosen: dict = {}
    out = []
    for d in sorted(I.spaces, key=lambda d: (abs(d), d)):
        for row in I.spaces[d]:
            J = _close(view, chosen) if chosen else _GradedIdeal(view, {})
            if J.contains(d, row):
                continue
            chosen.setdefault(d, []).append(list(row))
            out.append(view.element(d, row))
    return tuple(out)


@dataclass
class SpecSpace:
    points: list[GradedPrimeIdeal]
    specializations: list[tuple[int, int]]
    opens: dict[str, list[int]]

    def ids(self) -> list[int]:
        return list(range(len(self.points)))

    def generic_points(self) -> list[int]:
        below = {j for i, j in self.specializations if i != j}
        return [i for i in self.ids() if i not in below]

    def to_json(self) -> dict:
        return {
            "points": [{"id": i, "ideal": p.render(), "generators": [str(g) for g in p.generators]}
                       for i, p in enumerate(self.points)],
            "specializations": sorted([list(s) for s in self.specializations if s[0] != s[1]]),
            "opens": {k: v for k, v in sorted(self.opens.items())},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _order_points(pts: list[tuple[tuple, object]]):
    pts.sort(key=lambda p: [str(g) for g in p[0]])
    return pts


def spec_finite(R, even: bool = False, opens: Optional[Sequence] = None) -> SpecSpace:
    """All graded primes of a finite algebra by exhaustive enumeration.

    With ``even=True`` the spectrum of the even subring is computed instead.
    """
    A = ring_of(R)
    if isinstance(R, DiracField) and R.gen is None:
        A = PresentedAlgebra.free_on(R.base, [])
    if not isinstance(A, PresentedAlgebra):
        raise NotFinite("spec_finite needs a finite presented algebra")
    view = _FiniteView(A, even)
    primes = [I for I in _all_graded_ideals(view) if _is_prime(I)]
    pts = _order_points([(_minimal_generators(I), I) for I in primes])
    points = [GradedPrimeIdeal(g, A, I.spaces) for g, I in pts]
    ideals = [I for _, I in pts]
    spec = [(i, j) for i, I in enumerate(ideals) for j, J in enumerate(ideals) if I.subset(J)]
    probes = list(opens) if opens is not None else [A.one()] + [x for x in A.gens() if not (even and x.degree() % 2)]
    op = {}
    for f in probes:
        d = is_homogeneous(f)
        if not isinstance(d, int):
            continue
        v = view.coords(d, f) if d in view.basis else ()
        op[str(f)] = [i for i, I in enumerate(ideals) if not I.contains(d, v) and any(v)]
    space = SpecSpace(points, spec, op)
    space._ideals = ideals
    return space


def spec_special(R) -> SpecSpace:
    """Spectra of the catalogued symbolic classes: Dirac fields and k[t] on one generator."""
    if isinstance(R, (DiracField, Localization)):
        c = classify_dirac_field(R)
        if isinstance(c, DiracField):
            return SpecSpace([GradedPrimeIdeal(())], [(0, 0)], {"1": [0]})
        raise UnsupportedClass("not a recognized class")
    A = R
    if isinstance(A, PresentedAlgebra) and A.base.is_field:
        if not A.free.ngens:
            return SpecSpace([GradedPrimeIdeal(())], [(0, 0)], {"1": [0]})
        if A.free.ngens == 1 and not A.relations.generators:
            d = A.free.degrees[0]
            if d % 2 == 0 or A.base.characteristic == 2:
                t = A.gen(0)
                pts = [GradedPrimeIdeal((), A), GradedPrimeIdeal((t,), A)]
                return SpecSpace(pts, [(0, 0), (0, 1), (1, 1)], {"1": [0, 1], str(t): [0]})
    raise UnsupportedClass("spec_special: class not recognized")


def residue_field(R, prime: GradedPrimeIdeal) -> DiracField:
    if isinstance(R, DiracField):
        return R
    if isinstance(R, Localization):
        c = classify_dirac_field(R)
        if isinstance(c, DiracField):
            return c
        raise UnsupportedClass("residue fields of this localization are not catalogued")
    A = R
    if A.free.ngens == 1 and not A.relations.generators and A.base.is_field:
        if not prime.generators:
            return DiracField(A.base, (A.free.names[0], A.free.degrees[0]))
        return DiracField(A.base)
    Q = A.quotient(list(prime.generators))
    c = classify_dirac_field(Q)
    if isinstance(c, DiracField):
        return c
    raise UnsupportedClass("quotient by this prime is not a catalogued Dirac field")


# fibers and integrality

def _fiber(phi: AlgebraMap, prime: Optional[GradedPrimeIdeal]):
    A, B = phi.source, phi.target
    if not isinstance(B, PresentedAlgebra):
        raise UnsupportedClass("fibers are computed for presented targets")
    if isinstance(A, PresentedAlgebra) and not A.free.ngens:
        return B
    if prime is None:
        raise UnsupportedClass("a prime of the source is required")
    if isinstance(A, PresentedAlgebra) and A.free.ngens == 1 and not prime.generators:
        return Localization(B, phi.apply(A.gen(0)))
    imgs = [phi.apply(g) for g in prime.generators]
    return B.quotient([x for x in imgs if not x.is_zero()])


def quasi_finite_fiber(phi: AlgebraMap, prime: Optional[GradedPrimeIdeal] = None, bound: int = 32) -> Verdict:
    """Finite (total dimension), infinite (witness) or undecided for the fiber at a prime."""
    F = _fiber(phi, prime)
    if isinstance(F, Localization):
        if F.piece(0).is_zero():
            return Verdict("finite", {"dim": 0})
        if F.delta != 0:
            return Verdict("infinite", {"unit": str(F.g), "degree": F.delta})
        return Verdict("undecided", bound=bound)
    exps = nilpotency_exponents(F, bound)
    if exps is not None:
        total = sum(F.piece(d).invariants().rank for d in finite_degrees(F, bound))
        return Verdict("finite", {"dim": total})
    for x in F.gens():
        L = Localization(F, x)
        try:
            if not L.piece(0).is_zero():
                return Verdict("infinite", {"non_nilpotent": str(x)})
        except PieceNotFinite:
            continue
    return Verdict("undecided", bound=bound)


def even_subalgebra_map(B: PresentedAlgebra, bound: int = 16) -> AlgebraMap:
    """A free algebra on generators of the even part, mapped onto it."""
    from .calculus import even_generators
    gens = even_generators(B, bound)
    free = PresentedAlgebra.free_on(B.base, [(f"a{i}", g.degree()) for i, g in enumerate(gens)])
    return AlgebraMap(free, B, gens)


def integral_certificate(y, phi: AlgebraMap, bound: int = 8):
    """A monic homogeneous relation y^n + sum a_i y^i = 0 with a_i from the source, or None."""
    A, B = phi.source, phi.target
    if not isinstance(A, PresentedAlgebra) or not isinstance(B, PresentedAlgebra):
        raise UnsupportedClass("integral_certificate works between presented algebras")
    e = B.degree_of(y)
    if not isinstance(e, int):
        raise DegreeMismatch("y must be homogeneous and nonzero")
    base = B.base
    powers = [B.one()]
    for _ in range(bound):
        powers.append(powers[-1] * y)
    for n in range(1, bound + 1):
        d = n * e
        tgt = B.piece(d)
        cols, owners = [], []
        for i in range(n):
            sa = A.piece((n - i) * e)
            for b in sa.spanning:
                v = B.mul(phi.apply(b), powers[i])
                cols.append(tgt.dense(tgt.vector(v)))
                owners.append((i, b))
        rels = tgt.columns()
        allc = cols + rels
        rhs = tgt.dense(tgt.vector(-powers[n]))
        if not any(rhs):
            sol = [base.zero()] * len(allc)
        elif not allc:
            continue
        else:
            mat = [[allc[j][r] for j in range(len(allc))] for r in range(len(tgt.coords))]
            sol = solve_linear(mat, rhs, base, cols=len(allc))
            if sol is None:
                continue
        coeffs = [A.zero() for _ in range(n)]
        for c, (i, b) in zip(sol, owners):
            if c:
                coeffs[i] = coeffs[i] + A.scalar(c) * b
        check = powers[n]
        for i, a in enumerate(coeffs):
            check = check + phi.apply(a) * powers[i]
        assert B.is_zero(check), "integral certificate failed to verify"
        return IntegralCertificate(n, coeffs, phi)
    return None


@dataclass
class IntegralCertificate:
    degree: int
    coefficients: list
    phi: AlgebraMap

    def render(self) -> str:
        terms = [f"X^{self.degree}"]
        for i in range(self.degree - 1, -1, -1):
            a = self.coefficients[i]
            if a.is_zero():
                continue
            img = self.phi.apply(a)
            mono = "" if i == 0 else ("*X" if i == 1 else f"*X^{i}")
            terms.append(f"({img}){mono}")
        return " + ".join(terms)

    __str__ = render


# the structure-sheaf equalizer

def unit_certificate(R, fs: Sequence) -> Optional[list]:
    """Coefficients c_i with sum c_i f_i = 1, or None."""
    R = ring_of(R)
    tgt = R.piece(0)
    cols, owners = [], []
    for i, f in enumerate(fs):
        h = R.degree_of(f)
        if not isinstance(h, int):
            continue
        for b in R.piece(-h).spanning:
            cols.append(tgt.dense(tgt.vector(R.mul(b, f))))
            owners.append((i, b))
    allc = cols + tgt.columns()
    if not allc:
        return None
    n = len(tgt.coords)
    m = [[allc[j][r] for j in range(len(allc))] for r in range(n)]
    sol = solve_linear(m, tgt.dense(tgt.vector(R.one())), R.base, cols=len(allc))
    if sol is None:
        return None
    out = [R.zero() for _ in fs]
    for c, (i, b) in zip(sol, owners):
        if c:
            out[i] = R.add(out[i], R.scale(c, b))
    return out


class LevelEqualizer:
    """Equalizer checks for A -> prod A_{g_i} => prod A_{g_i g_j}, one level at a time.

    A fraction in A_{g_i} of degree d is a numerator in A_{d + k deg g_i} at
    level k; two numerators agree once a power g^N kills their difference.
    Powers up to ``power`` are used for these annihilations.
    """

    def __init__(self, R, cover: Sequence, power: int = 4):
        self.R = ring_of(R)
        R = self.R
        self.cover = [R.coerce(f) for f in cover]
        self.gs = []
        for f in self.cover:
            h = R.degree_of(f)
            if not isinstance(h, int):
                raise DegreeMismatch(f"cover element {f} is not homogeneous and nonzero")
            self.gs.append(R.mul(f, f) if h % 2 else f)
        # a square-zero odd element localizes to the zero ring; its power g^N = 0 kills everything
        self.deg = [R.degree_of(g) if isinstance(R.degree_of(g), int) else 0 for g in self.gs]
        self.power = power
        self._pw: dict = {}

    def gpow(self, i: int, n: int):
        key = (i, n)
        if key not in self._pw:
            R = self.R
            out = R.one()
            for _ in range(n):
                out = R.mul(out, self.gs[i])
            self._pw[key] = out
        return self._pw[key]

    def block(self, d: int):
        return self.R.piece(d)

    def _mult_map(self, d: int, c, dc: int):
        """Dense images of the degree-d spanning set under multiplication by c."""
        src = self.R.piece(d)
        tgt = self.R.piece(d + dc)
        return [tgt.dense(tgt.vector(self.R.mul(c, b))) for b in src.spanning], tgt

    def _kernel_of_power(self, d: int, i: int, n: int) -> list[list]:
        imgs, tgt = self._mult_map(d, self.gpow(i, n), n * self.deg[i])
        return preimage(imgs, tgt.columns(), len(tgt.coords), self.R.base)

    def injective(self, d: int) -> bool:
        """No nonzero a in A_d dies in every A_{g_i}."""
        base = self.R.base
        src = self.R.piece(d)
        n = len(src.coords)
        if not n:
            return True
        common = None
        for i in range(len(self.gs)):
            ker = self._kernel_of_power(d, i, self.power) + src.columns()
            common = ker if common is None else _intersect(common, ker, n, base)
        return all(in_span(v, src.columns(), base) for v in (common or []))

    def glues(self, d: int, k: int) -> bool:
        """Every compatible tuple at level k comes from A_d."""
        R = self.R
        base = R.base
        m = len(self.gs)
        N = self.power
        blocks = [R.piece(d + k * self.deg[i]) for i in range(m)]
        offs, tot = [], 0
        for b in blocks:
            offs.append(tot)
            tot += len(b.coords)
        if not tot:
            return True
        # compatibility: (g_i g_j)^N (x_i g_j^k - x_j g_i^k) = 0 in A
        cols_all = []
        rel_all = []
        ntarget = 0
        pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
        pair_tgts = []
        for i, j in pairs:
            dt = d + (k + N) * (self.deg[i] + self.deg[j])
            t = R.piece(dt)
            pair_tgts.append((ntarget, t))
            ntarget += len(t.coords)
        for s in range(m):
            for b in blocks[s].spanning:
                v = [base.zero()] * ntarget
                for (i, j), (off, t) in zip(pairs, pair_tgts):
                    if s not in (i, j):
                        continue
                    other = j if s == i else i
                    mult = R.mul(R.mul(self.gpow(i, N), self.gpow(j, N)), self.gpow(other, k))
                    img = R.mul(mult, b)
                    if s == j:
                        img = R.neg(img)
                    for c, x in t.vector(img).items():
                        pos = off + t.index[c]
                        v[pos] = base.add(v[pos], x)
                cols_all.append(v)
        for off, t in pair_tgts:
            for col in t.columns():
                w = [base.zero()] * ntarget
                w[off:off + len(col)] = col
                rel_all.append(w)
        if ntarget:
            compatible = preimage(cols_all, rel_all, ntarget, base)
        else:
            compatible = [[base.one() if a == b else base.zero() for a in range(tot)] for b in range(tot)]
        # image: (a g_i^k)_i plus kernels of g_i^N plus the block relations
        image = []
        src = R.piece(d)
        for a in src.spanning:
            w = [base.zero()] * tot
            for i, b in enumerate(blocks):
                img = R.mul(self.gpow(i, k), a)
                for c, x in b.vector(img).items():
                    pos = offs[i] + b.index[c]
                    w[pos] = base.add(w[pos], x)
            image.append(w)
        for i, b in enumerate(blocks):
            extra = self._kernel_of_power(d + k * self.deg[i], i, N) + b.columns()
            for col in extra:
                w = [base.zero()] * tot
                w[offs[i]:offs[i] + len(col)] = col
                image.append(w)
        return all(in_span(v, image, base) for v in compatible)


def _intersect(a: list[list], b: list[list], n: int, base: BaseRing) -> list[list]:
    """Generators of span(a) intersected with span(b)."""
    if not a or not b:
        return []
    neg_b = [[base.neg(x) for x in v] for v in b]
    ker = preimage([list(v) for v in a] + neg_b, [], n, base)
    out = []
    for z in ker:
        w = [base.zero()] * n
        for c, v in zip(z[:len(a)], a):
            if c:
                w = [base.add(x, base.mul(c, y)) for x, y in zip(w, v)]
        if any(w):
            out.append(w)
    return out


def _support_degrees(R, bound: int) -> list[int]:
    s = R.support_sign()
    if s == 0:
        return [0]
    if s == -1:
        return list(range(-bound, 1))
    if s == 1:
        return list(range(0, bound + 1))
    return list(range(-bound, bound + 1))


def sheaf_cover_check(R, cover: Sequence, bound: int = 32, levels: int = 3, power: int = 4) -> Verdict:
    """Degreewise equalizer check for the structure sheaf on a cover by distinguished opens."""
    R = ring_of(R)
    cert = unit_certificate(R, [R.coerce(f) for f in cover])
    if cert is None:
        raise ValueError("the cover does not generate the unit ideal")
    eq = LevelEqualizer(R, cover, power)
    for d in _support_degrees(R, bound):
        if not eq.injective(d):
            return Verdict("false", {"degree": d, "reason": "not injective"}, bound)
        for k in range(levels + 1):
            if not eq.glues(d, k):
                return Verdict("false", {"degree": d, "level": k, "reason": "compatible tuple not glued"}, bound)
    return Verdict("true", bound=bound, detail=f"levels 0..{levels}")


# orbit spaces

def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by monic b over F_p; coefficient lists, lowest degree first."""
    a = a[:]
    while len(a) >= len(b):
        c = a[-1] % p
        if c:
            shift = len(a) - len(b)
            for i, x in enumerate(b):
                a[shift + i] = (a[shift + i] - c * x) % p
        a.pop()
    while a and a[-1] % p == 0:
        a.pop()
    return a


def _monic_irreducibles(p: int, max_deg: int) -> list[list[int]]:
    out: list[list[int]] = []
    for n in range(1, max_deg + 1):
        for low in itertools.product(range(p), repeat=n):
            f = list(low) + [1]
            if all(_poly_mod(f, g, p) for g in out if len(g) <= n):
                out.append(f)
    return out


def _underlying_view(view: _FiniteView):
    """Flat basis of the whole finite ring: (degree, index) pairs."""
    return [(d, i) for d in view.degrees for i in range(view.dim(d))]


def orbit_space_check(R, bound: int = 3) -> Verdict:
    """Ungraded primes map onto graded primes via q -> largest graded ideal inside q."""
    if isinstance(R, DiracField) or isinstance(R, Localization):
        c = R if isinstance(R, DiracField) else classify_dirac_field(R)
        if not isinstance(c, DiracField):
            raise UnsupportedClass("orbit_space_check: unsupported localization")
        if c.gen is None:
            return Verdict("true", {"ungraded_primes": 1, "graded_primes": 1})
        p = c.base.p if c.base.kind == "F" else None
        if p is None:
            raise UnsupportedClass("the Laurent case needs a prime field")
        irr = [f for f in _monic_irreducibles(p, bound) if f != [0, 1]]
        for f in irr:
            # c*t^n lies in (f) iff f divides t^n, which needs t = 0 mod f
            if not _poly_mod([0, 1], f, p):
                return Verdict("false", {"prime": str(f)})
        return Verdict("true", {"ungraded_primes": len(irr) + 1, "graded_primes": 1}, bound)
    A = ring_of(R)
    view = _FiniteView(A)
    if any(d % 2 for d in view.degrees):
        raise UnsupportedClass("orbit_space_check needs an even ring")
    graded = spec_finite(A)
    flat = _underlying_view(view)
    dims = {d: view.dim(d) for d in view.degrees}
    primes = _ungraded_primes(view, flat)
    hit = set()
    for q in primes:
        spaces = {}
        for d in view.degrees:
            rows = []
            for v in itertools.product(range(view.base.p), repeat=dims[d]):
                if any(v) and _ungraded_contains(view, flat, q, {d: v}):
                    rows.append(list(v))
            if rows:
                spaces[d] = span_basis(rows, dims[d], view.base)
        gi = _GradedIdeal(view, spaces)
        match = [i for i, J in enumerate(graded._ideals) if gi.subset(J) and J.subset(gi)]
        if not match:
            return Verdict("false", {"reason": "largest graded ideal is not a graded prime"})
        hit.add(match[0])
    if hit != set(range(len(graded.points))):
        return Verdict("false", {"reason": "some graded prime has an empty fiber"})
    return Verdict("true", {"ungraded_primes": len(primes), "graded_primes": len(graded.points)})


def _flat_element(view, flat, vec) -> Element:
    out = view.A.zero()
    for c, (d, i) in zip(vec, flat):
        if c:
            out = out + view.A.scalar(c) * view.basis[d][i]
    return out


def _flat_coords(view, flat, x: Element) -> list:
    parts = x.homogeneous_parts()
    out = []
    cache = {d: view.coords(d, parts[d]) if d in parts else (0,) * view.dim(d) for d in view.degrees}
    for d, i in flat:
        out.append(cache[d][i])
    return out


def _ungraded_contains(view, flat, q, hom: dict) -> bool:
    vec = []
    for d, i in flat:
        vec.append(hom.get(d, (0,) * view.dim(d))[i] if d in hom else 0)
    return in_span(vec, q, view.base)


def _ungraded_primes(view: _FiniteView, flat) -> list[list[list]]:
    """All prime ideals of the underlying (ungraded) ring, by brute force."""
    base = view.base
    p = base.p
    n = len(flat)
    elements = [list(v) for v in itertools.product(range(p), repeat=n)]
    basis_elts = [_flat_element(view, flat, [1 if j == i else 0 for j in range(n)]) for i in range(n)]

    def close(rows):
        cur = span_basis(rows, n, base)
        queue = list(cur)
        while queue:
            v = queue.pop()
            x = _flat_element(view, flat, v)
            for b in basis_elts:
                w = _flat_coords(view, flat, b * x)
                if any(w) and not in_span(w, cur, base):
                    cur = span_basis(cur + [w], n, base)
                    queue.append(w)
        return cur

    seen = {(): []}
    frontier = [[]]
    while frontier:
        nxt = []
        for I in frontier:
            for e in elements:
                if not any(e) or in_span(e, I, base):
                    continue
                J = close(I + [e])
                key = tuple(map(tuple, J))
                if key not in seen:
                    seen[key] = J
                    nxt.append(J)
        frontier = nxt
    one = _flat_coords(view, flat, view.A.one())
    primes = []
    for I in seen.values():
        if in_span(one, I, base):
            continue
        outside = [e for e in elements if not in_span(e, I, base)]
        ok = True
        for a, b in itertools.combinations_with_replacement(outside, 2):
            prod = _flat_element(view, flat, a) * _flat_element(view, flat, b)
            if in_span(_flat_coords(view, flat, prod), I, base):
                ok = False
                break
        if ok:
            primes.append(I)
    return primes
