"""Free Dirac algebras on finitely many homogeneous generators.

An element is a finite map from exponent vectors (in generator declaration
order) to nonzero coefficients. Products of odd generators pick up Koszul
signs, and a monomial in which some odd generator appears at least twice is
2-torsion, so its coefficient is reduced modulo 2.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .exactlin import BaseRing
from .grading import GradedSet, koszul_sign

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


class AlgebraMismatch(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class FreeDiracAlgebra:
    def __init__(self, base: BaseRing, generators: Union[GradedSet, Iterable[tuple[str, int]]]):
        self.base = base
        self.generators = generators if isinstance(generators, GradedSet) else GradedSet(generators)
        self.degrees = self.generators.degrees
        self.names = self.generators.names
        self.odd = tuple(d % 2 for d in self.degrees)
        degs = self.degrees
        self.degreewise_finite = all(d < 0 for d in degs) or all(d > 0 for d in degs)

    @property
    def ngens(self) -> int:
        return len(self.degrees)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FreeDiracAlgebra) and self.base == other.base
                and self.generators == other.generators)

    def __hash__(self) -> int:
        return hash((self.base, self.generators))

    def __repr__(self) -> str:
        gens = ", ".join(f"{n}:{d}" for n, d in self.generators)
        return f"{self.base}[{gens}]"

    # monomials

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def is_torsion_monomial(self, m: Monomial) -> bool:
        return any(o and e >= 2 for o, e in zip(self.odd, m))

    def reduce_coefficient(self, m: Monomial, c):
        """Canonical coefficient of c*m, zero if the term vanishes."""
        base = self.base
        c = base.coerce(c)
        if c == 0 or not self.is_torsion_monomial(m):
            return c
        if base.kind == "Z":
            return c % 2
        if base.kind == "F" and base.p == 2:
            return c
        return base.zero()

    def merge_sign(self, m: Monomial, n: Monomial) -> int:
        """Sign of sorting the word m*n back into generator order."""
        parity = 0
        seen = 0  # sum of odd b_j for j < i
        for i, o in enumerate(self.odd):
            if o:
                parity += m[i] * seen
                seen += n[i]
        return -1 if parity % 2 else 1

    def monomials_of_degree(self, d: int) -> list[Monomial]:
        """All exponent vectors of degree d, in descending lex order."""
        if not self.degreewise_finite:
            raise NotDegreewiseFinite(self)
        degs = self.degrees
        n = len(degs)
        out: list[Monomial] = []

        def rec(i: int, rest: int, acc: list[int]):
            if i == n:
                if rest == 0:
                    out.append(tuple(acc))
                return
            di = degs[i]
            top = rest // di if rest * di >= 0 else -1
            for e in range(top, -1, -1):
                acc.append(e)
                rec(i + 1, rest - e * di, acc)
                acc.pop()

        if n == 0:
            return [()] if d == 0 else []
        rec(0, d, [])
        return out

    # elements

    def element(self, terms: Mapping[Monomial, Scalar]) -> "Element":
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            assert len(m) == self.ngens
            c = self.reduce_coefficient(m, c)
            if c != 0:
                clean[m] = c
        return Element(self, clean, _trusted=True)

    def zero(self) -> "Element":
        return Element(self, {}, _trusted=True)

    def one(self) -> "Element":
        return self.scalar(1)

    def scalar(self, c: Scalar) -> "Element":
        return self.element({(0,) * self.ngens: c})

    def monomial(self, m: Sequence[int], c: Scalar = 1) -> "Element":
        return self.element({tuple(m): c})

    def gen(self, name: Union[str, int]) -> "Element":
        i = name if isinstance(name, int) else self.generators.index(name)
        m = [0] * self.ngens
        m[i] = 1
        return self.monomial(m)

    def gens(self) -> list["Element"]:
        return [self.gen(i) for i in range(self.ngens)]

    def mul(self, a: "Element", b: "Element") -> "Element":
        if a.algebra != self or b.algebra != self:
            raise AlgebraMismatch("operands live in different algebras")
        base = self.base
        acc: dict[Monomial, Scalar] = {}
        for m, c in a._terms.items():
            for n, e in b._terms.items():
                mn = tuple(x + y for x, y in zip(m, n))
                v = base.mul(c, e)
                if self.merge_sign(m, n) < 0:
                    v = base.neg(v)
                acc[mn] = base.add(acc.get(mn, base.zero()), v)
        return self.element(acc)


class NotDegreewiseFinite(ValueError):
    def __init__(self, algebra):
        super().__init__(f"{algebra} is not degreewise finite "
                         "(generator degrees must be nonzero and of one sign)")


class Element:
    """Normalized element of a free Dirac algebra. Treat as immutable."""

    __slots__ = ("algebra", "_terms", "_hash")

    def __init__(self, algebra: FreeDiracAlgebra, terms: Mapping[Monomial, Scalar], _trusted: bool = False):
        if not _trusted:
            terms = algebra.element(terms)._terms
        self.algebra = algebra
        self._terms = dict(terms)
        self._hash = None

    @property
    def terms(self) -> dict[Monomial, Scalar]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Scalar]]:
        return iter(sorted(self._terms.items(), reverse=True))

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, m: Monomial):
        return self._terms.get(tuple(m), self.algebra.base.zero())

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.algebra != self.algebra:
                raise AlgebraMismatch("operands live in different algebras")
            return other
        return self.algebra.scalar(other)

    def __add__(self, other) -> "Element":
        other = self._coerce(other)
        base = self.algebra.base
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = base.add(acc.get(m, base.zero()), c)
        return self.algebra.element(acc)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        base = self.algebra.base
        return self.algebra.element({m: base.neg(c) for m, c in self._terms.items()})

    def __sub__(self, other) -> "Element":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Element":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Element":
        return self.algebra.mul(self, self._coerce(other))

    def __rmul__(self, other) -> "Element":
        return self.algebra.mul(self._coerce(other), self)

    def __pow__(self, n: int) -> "Element":
        assert n >= 0
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            if isinstance(other, (int, Fraction)):
                return self == self.algebra.scalar(other)
            return NotImplemented
        return self.algebra == other.algebra and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self._terms.items())))
        return self._hash

    def degrees(self) -> set[int]:
        return {self.algebra.mono_degree(m) for m in self._terms}

    def is_homogeneous(self) -> Union[int, str]:
        return is_homogeneous(self)

    def degree(self) -> int:
        d = is_homogeneous(self)
        if not isinstance(d, int):
            raise DegreeMismatch(f"{self} is {d}, not homogeneous")
        return d

    def homogeneous_parts(self) -> dict[int, "Element"]:
        parts: dict[int, dict] = {}
        for m, c in self._terms.items():
            parts.setdefault(self.algebra.mono_degree(m), {})[m] = c
        return {d: Element(self.algebra, t, _trusted=True) for d, t in sorted(parts.items())}

    def render(self) -> str:
        return render(self)

    __str__ = render

    def __repr__(self) -> str:
        return f"Element({render(self)})"


def render_monomial(alg: FreeDiracAlgebra, m: Monomial) -> str:
    return "*".join(f"{alg.names[i]}^{e}" for i, e in enumerate(m) if e)


def render(a: Element) -> str:
    """Canonical text form, e.g. ``-1*x^1*y^2 + 3*t^1``."""
    if a.is_zero():
        return "0"
    base = a.algebra.base
    parts = []
    for m, c in a.items():
        mono = render_monomial(a.algebra, m)
        coeff = base.render(c)
        parts.append(f"{coeff}*{mono}" if mono else coeff)
    return " + ".join(parts)


def mul(a: Element, b: Element) -> Element:
    return a.algebra.mul(a, b)


def is_homogeneous(a: Element) -> Union[int, str]:
    """The common degree of all terms, ``"zero"`` or ``"inhomogeneous"``."""
    degs = a.degrees()
    if not degs:
        return "zero"
    if len(degs) > 1:
        return "inhomogeneous"
    return degs.pop()


def partial_derivative(f: Element, x: Union[str, int]) -> Element:
    """Coefficient of dx in df, with dx written to the right.

    For a sorted monomial word each occurrence of x contributes the
    remaining word times the Koszul sign of moving dx past everything to
    its right.
    """
    alg = f.algebra
    i = x if isinstance(x, int) else alg.generators.index(x)
    di = alg.degrees[i]
    base = alg.base
    acc: dict[Monomial, Scalar] = {}
    for m, c in f._terms.items():
        a = m[i]
        if a == 0:
            continue
        later = sum(m[l] * alg.degrees[l] for l in range(i + 1, alg.ngens))
        total = 0
        for j in range(1, a + 1):
            total += koszul_sign(di, (a - j) * di + later)
        if total == 0:
            continue
        rest = list(m)
        rest[i] -= 1
        rest = tuple(rest)
        v = base.mul(c, base.coerce(total))
        acc[rest] = base.add(acc.get(rest, base.zero()), v)
    return alg.element(acc)


def apply_map(images: Union[Mapping[str, Element], Sequence[Element]], a: Element,
              target: Optional[FreeDiracAlgebra] = None) -> Element:
    """Value at a of the algebra map sending each generator to its image."""
    src = a.algebra
    if isinstance(images, Mapping):
        imgs = [images[n] for n in src.names]
    else:
        imgs = list(images)
    if len(imgs) != src.ngens:
        raise ValueError("need one image per generator")
    if target is None:
        if not imgs:
            raise ValueError("target algebra required for a map with no generators")
        target = imgs[0].algebra
    if target.base != src.base:
        raise AlgebraMismatch("source and target bases differ")
    for name, d, img in zip(src.names, src.degrees, imgs):
        if img.algebra != target:
            raise AlgebraMismatch(f"image of {name} lives in another algebra")
        h = is_homogeneous(img)
        if h != "zero" and h != d:
            raise DegreeMismatch(f"image of {name} has degree {h}, expected {d}")
    powers: list[list[Element]] = [[target.one()] for _ in imgs]
    out = target.zero()
    for m, c in a._terms.items():
        term = target.scalar(c)
        for i, e in enumerate(m):
            while len(powers[i]) <= e:
                powers[i].append(powers[i][-1] * imgs[i])
            if e:
                term = term * powers[i][e]
        out = out + term
    return out
