"""Finitely presented Dirac algebras and degreewise linear algebra.

Every question about a homogeneous ideal is answered one degree at a time:
the degree-d piece of a quotient is the span of the degree-d monomials
modulo the span of monomial multiples of the relations, a finite linear
system whenever the generator degrees are nonzero and of one sign.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Optional, Sequence, Union

from .exactlin import BaseRing, ModuleInvariants, quotient_invariants, solve_linear
from .freealg import (Element, FreeDiracAlgebra, Monomial, NotDegreewiseFinite,
                      DegreeMismatch, is_homogeneous)


class HomogeneousIdeal:
    def __init__(self, ambient: FreeDiracAlgebra, generators: Sequence[Element] = ()):
        gens = []
        for g in generators:
            if g.algebra != ambient:
                raise ValueError("ideal generator outside the ambient algebra")
            h = is_homogeneous(g)
            if h == "inhomogeneous":
                raise DegreeMismatch(f"ideal generator {g} is not homogeneous")
            if h != "zero":
                gens.append(g)
        self.ambient = ambient
        self.generators = tuple(gens)

    def __repr__(self) -> str:
        return "(" + ", ".join(map(str, self.generators)) + ")"


class PresentedAlgebra:
    """A free Dirac algebra modulo a homogeneous ideal."""

    def __init__(self, free: FreeDiracAlgebra, relations: Sequence[Element] = ()):
        if isinstance(relations, HomogeneousIdeal):
            ideal = relations
        else:
            ideal = HomogeneousIdeal(free, relations)
        self.free = free
        self.relations = ideal
        self.base = free.base
        self.degreewise_finite = free.degreewise_finite
        self._cache: dict = {}

    @classmethod
    def free_on(cls, base: BaseRing, gens: Sequence[tuple[str, int]]) -> "PresentedAlgebra":
        return cls(FreeDiracAlgebra(base, gens))

    def quotient(self, extra: Sequence[Element]) -> "PresentedAlgebra":
        return PresentedAlgebra(self.free, list(self.relations.generators) + list(extra))

    def gen(self, name) -> Element:
        return self.free.gen(name)

    def gens(self) -> list[Element]:
        return self.free.gens()

    def one(self) -> Element:
        return self.free.one()

    def zero(self) -> Element:
        return self.free.zero()

    def scalar(self, c) -> Element:
        return self.free.scalar(c)

    @property
    def names(self):
        return self.free.names

    @property
    def degrees(self):
        return self.free.degrees

    def require_finite(self):
        if not self.degreewise_finite:
            raise NotDegreewiseFinite(self)

    def __repr__(self) -> str:
        if not self.relations.generators:
            return repr(self.free)
        return f"{self.free!r}/{self.relations!r}"

    def monomials(self, d: int) -> list[Monomial]:
        """Degree-d monomials that are nonzero in the free algebra."""
        key = ("mono", d)
        if key not in self._cache:
            free = self.free
            ms = free.monomials_of_degree(d)
            if free.base.two_is_unit():
                ms = [m for m in ms if not free.is_torsion_monomial(m)]
            self._cache[key] = ms
        return self._cache[key]

    def graded_piece_basis(self, d: int) -> "GradedPiece":
        return graded_piece_basis(self, d)

    # graded ring protocol, shared with localizations

    def piece(self, d: int) -> "Piece":
        key = ("piece", d)
        if key not in self._cache:
            self._cache[key] = _algebra_piece(self, d)
        return self._cache[key]

    def support_sign(self) -> int:
        """-1 or +1 when all nonzero pieces sit in degrees of that sign, 0 when trivially graded.

        Localizations answer None (pieces in both directions).
        """
        degs = self.free.degrees
        if not degs:
            return 0
        return -1 if degs[0] < 0 else 1

    def coerce(self, x) -> Element:
        return x if isinstance(x, Element) else self.scalar(x)

    def mul(self, a: Element, b: Element) -> Element:
        return a * b

    def add(self, a: Element, b: Element) -> Element:
        return a + b

    def neg(self, a: Element) -> Element:
        return -a

    def scale(self, c, a: Element) -> Element:
        return self.free.scalar(c) * a

    def degree_of(self, a: Element) -> Union[int, str]:
        return is_homogeneous(a)

    def is_zero(self, a: Element) -> bool:
        return is_zero(a, self)

    def equal(self, a: Element, b: Element) -> bool:
        return elements_equal(a, b, self)

    def render(self, a: Element) -> str:
        return a.render()

    def lift(self, a: Element) -> Element:
        """Polynomial in the presentation generators representing a."""
        return a

    def presentation(self) -> tuple[FreeDiracAlgebra, list[Element], "Callable"]:
        """(free algebra, relations, evaluation into this ring)."""
        return self.free, list(self.relations.generators), (lambda p: p)

    def odd_generators(self) -> list[Element]:
        return [self.free.gen(i) for i, o in enumerate(self.free.odd) if o]


@dataclass
class DegreewiseSystem:
    """A finite base-module given as coordinates modulo a span of relations.

    ``coords`` lists basis symbols of an ambient free module; ``relations``
    are sparse vectors (dict coord -> scalar) spanning the submodule.
    """

    base: BaseRing
    coords: list
    relations: list[dict]
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {c: i for i, c in enumerate(self.coords)}

    def dense(self, v: dict) -> list:
        out = [self.base.zero()] * len(self.coords)
        for c, x in v.items():
            i = self.index[c]
            out[i] = self.base.add(out[i], x)
        return out

    def columns(self) -> list[list]:
        return [self.dense(v) for v in self.relations]

    def invariants(self) -> ModuleInvariants:
        return quotient_invariants(len(self.coords), self.columns(), self.base)

    def solve(self, target: dict, extra: Sequence[dict] = ()) -> Optional[list]:
        """Coefficients expressing target in span(relations + extra), or None."""
        n = len(self.coords)
        cols = self.columns() + [self.dense(v) for v in extra]
        m = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
        return solve_linear(m, self.dense(target), self.base, cols=len(cols))

    def contains(self, target: dict) -> bool:
        if not any(target.values()):
            return True
        return self.solve(target) is not None


class Piece(DegreewiseSystem):
    """Degree-d piece of a graded ring or module.

    Besides the coordinates and relations it carries ``spanning``, ring or
    module elements whose vectors span the piece, and ``vector`` mapping an
    element of that degree to ambient coordinates.
    """

    def __init__(self, base, degree, coords, relations, spanning, vector):
        super().__init__(base, list(coords), list(relations))
        self.degree = degree
        self.spanning = list(spanning)
        self._vector = vector
        self._inv = None

    def vector(self, x) -> dict:
        return self._vector(x)

    def invariants(self) -> ModuleInvariants:
        if self._inv is None:
            self._inv = super().invariants()
        return self._inv

    def is_zero(self) -> bool:
        return self.invariants().is_zero()

    def element_is_zero(self, x) -> bool:
        return self.contains(self.vector(x))

    def render(self) -> str:
        return self.invariants().render(self.base)


def torsion_relations(alg: "PresentedAlgebra", coords: Sequence) -> list[dict]:
    """Over the integers, the 2-torsion of monomials with a repeated odd generator."""
    if alg.base.kind != "Z":
        return []
    return [{c: 2} for c in coords if alg.free.is_torsion_monomial(c)]


def _algebra_piece(alg: "PresentedAlgebra", d: int) -> Piece:
    alg.require_finite()
    free = alg.free
    monos = alg.monomials(d)
    rels: list[dict] = torsion_relations(alg, monos)
    for f in alg.relations.generators:
        df = f.degree()
        for m in alg.monomials(d - df):
            prod = free.monomial(m) * f
            if not prod.is_zero():
                rels.append(prod.terms)
    spanning = [free.monomial(m) for m in monos]

    def vector(x: Element) -> dict:
        if x.algebra != free:
            raise ValueError("element from another algebra")
        for m in x.terms:
            if free.mono_degree(m) != d:
                raise DegreeMismatch(f"{x} has a term outside degree {d}")
        return x.terms

    return Piece(alg.base, d, monos, rels, spanning, vector)


@dataclass(frozen=True)
class GradedPiece:
    """A graded piece as a module over the base ring.

    Over a field ``basis`` lists monomials spanning a complement of the
    relations (so ``dim == len(basis)``); over the integers the piece is
    ``Z^rank`` plus the cyclic torsion factors.
    """

    base: BaseRing
    degree: int
    invariants: ModuleInvariants
    basis: tuple = ()

    @property
    def rank(self) -> int:
        return self.invariants.rank

    @property
    def dim(self) -> int:
        return self.invariants.rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.invariants.torsion

    def is_zero(self) -> bool:
        return self.invariants.is_zero()

    def render(self) -> str:
        return self.invariants.render(self.base)


def graded_piece_basis(alg: "PresentedAlgebra", d: int) -> GradedPiece:
    piece = alg.piece(d)
    inv = piece.invariants()
    basis: tuple = ()
    if alg.base.is_field:
        from .exactlin import rref
        dense = piece.columns()
        pivots = set(rref(dense, alg.base)[1]) if dense else set()
        basis = tuple(c for i, c in enumerate(piece.coords) if i not in pivots)
    return GradedPiece(alg.base, d, inv, basis)


def _vector(f: Element) -> dict:
    return f.terms


def ideal_membership(f: Element, alg: PresentedAlgebra, ideal: Sequence[Element] = ()) -> Optional[list[Element]]:
    """Certificate [m_j] with f = sum m_j*g_j, or None when f is not a member.

    The g_j are the given ideal generators followed by the relations of alg;
    with no ideal given this is membership in the relation ideal itself.
    """
    alg.require_finite()
    h = is_homogeneous(f)
    if h == "inhomogeneous":
        raise DegreeMismatch(f"{f} is not homogeneous")
    gens = [g for g in ideal] + list(alg.relations.generators)
    free = alg.free
    if h == "zero":
        return [free.zero() for _ in gens]
    d = h
    coords = list(alg.monomials(d))
    cols: list[dict] = []
    labels: list = []
    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        for m in alg.monomials(d - g.degree()):
            prod = free.monomial(m) * g
            if not prod.is_zero():
                cols.append(_vector(prod))
                labels.append((j, m))
    tors = torsion_relations(alg, coords)
    cols.extend(tors)
    labels.extend([None] * len(tors))
    sys = DegreewiseSystem(alg.base, coords, cols)
    sol = sys.solve(_vector(f))
    if sol is None:
        return None
    cert = [free.zero() for _ in gens]
    for c, lab in zip(sol, labels):
        if lab is None or c == 0:
            continue
        j, m = lab
        cert[j] = cert[j] + free.monomial(m, c)
    return cert


def elements_equal(f: Element, g: Element, alg: PresentedAlgebra) -> bool:
    alg.require_finite()
    diff = f - g
    return all(alg.piece(d).element_is_zero(part) for d, part in diff.homogeneous_parts().items())


def is_zero(f: Element, alg: PresentedAlgebra) -> bool:
    return elements_equal(f, alg.zero(), alg)


def unit_ideal_certificate(gens: Sequence[Element], alg: PresentedAlgebra,
                           max_exponent: int = 8) -> Optional[list[Element]]:
    """Search for a_j with sum a_j*g_j = 1 modulo the relations.

    Works for any presented algebra. Multipliers range over monomials of
    total exponent at most ``max_exponent`` in the degree complementary to
    each generator; None means no certificate within that bound.
    """
    free = alg.free
    allg = [g for g in gens] + list(alg.relations.generators)
    if alg.degreewise_finite:
        return ideal_membership(free.one(), alg, gens)
    monos = _bounded_monomials(free, max_exponent)
    cols: list[dict] = []
    labels: list = []
    for j, g in enumerate(allg):
        parts = g.homogeneous_parts()
        if len(parts) != 1:
            continue
        dg = next(iter(parts))
        for m in monos.get(-dg, []):
            prod = free.monomial(m) * g
            if not prod.is_zero():
                cols.append(_vector(prod))
                labels.append((j, m))
    coords = sorted({c for v in cols for c in v} | {(0,) * free.ngens})
    tors = torsion_relations(alg, coords)
    cols.extend(tors)
    labels.extend([None] * len(tors))
    sol = DegreewiseSystem(alg.base, coords, cols).solve(_vector(free.one()))
    if sol is None:
        return None
    cert = [free.zero() for _ in allg]
    for c, lab in zip(sol, labels):
        if lab is not None and c != 0:
            cert[lab[0]] = cert[lab[0]] + free.monomial(lab[1], c)
    return cert


def bounded_membership(f: Element, alg: PresentedAlgebra, ideal: Sequence[Element] = (),
                       max_exponent: int = 8) -> Optional[list[Element]]:
    """Membership certificate searched among multipliers of bounded exponent.

    Sound but incomplete outside the degreewise-finite case.
    """
    if alg.degreewise_finite:
        return ideal_membership(f, alg, ideal)
    free = alg.free
    h = is_homogeneous(f)
    allg = list(ideal) + list(alg.relations.generators)
    if h == "zero":
        return [free.zero() for _ in allg]
    if h == "inhomogeneous":
        raise DegreeMismatch(f"{f} is not homogeneous")
    monos = _bounded_monomials(free, max_exponent)
    cols, labels = [], []
    for j, g in enumerate(allg):
        dg = g.degree()
        for m in monos.get(h - dg, []):
            prod = free.monomial(m) * g
            if not prod.is_zero():
                cols.append(_vector(prod))
                labels.append((j, m))
    coords = sorted({c for v in cols for c in v} | set(_vector(f)))
    tors = torsion_relations(alg, coords)
    cols.extend(tors)
    labels.extend([None] * len(tors))
    sol = DegreewiseSystem(alg.base, coords, cols).solve(_vector(f))
    if sol is None:
        return None
    cert = [free.zero() for _ in allg]
    for c, lab in zip(sol, labels):
        if lab is not None and c != 0:
            cert[lab[0]] = cert[lab[0]] + free.monomial(lab[1], c)
    return cert


def _bounded_monomials(free: FreeDiracAlgebra, max_exponent: int) -> dict[int, list[Monomial]]:
    out: dict[int, list[Monomial]] = {}
    n = free.ngens

    def rec(i, left, acc):
        if i == n:
            m = tuple(acc)
            if not (free.base.two_is_unit() and free.is_torsion_monomial(m)):
                out.setdefault(free.mono_degree(m), []).append(m)
            return
        for e in range(left + 1):
            acc.append(e)
            rec(i + 1, left - e, acc)
            acc.pop()

    rec(0, max_exponent, [])
    return out
