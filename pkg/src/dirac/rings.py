"""Localizations, Dirac fields and maps between graded rings.

A localization ``A_f`` of a degreewise-finite presented algebra is
computed one degree at a time as the colimit of
``A_d --f--> A_{d+deg f} --f--> ...``. Each piece is represented at a level
K where the transition maps have become isomorphisms modulo f-power
torsion, and a fraction a/f^k is written at that level.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional, Sequence, Union

from .exactlin import BaseRing, in_span, preimage, quotient_invariants, solve_linear, span_basis
from .freealg import DegreeMismatch, Element, FreeDiracAlgebra, is_homogeneous
from .presalg import Piece, PresentedAlgebra


class PieceNotFinite(ValueError):
    pass


class LocElement:
    """The fraction ``num / g^k`` in a localization. Treat as immutable."""

    __slots__ = ("ring", "num", "k")

    def __init__(self, ring: "Localization", num: Element, k: int = 0):
        assert k >= 0
        self.ring = ring
        self.num = num
        self.k = k

    def __add__(self, other):
        return self.ring.add(self, self.ring.coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return self.ring.neg(self)

    def __sub__(self, other):
        return self.ring.add(self, self.ring.neg(self.ring.coerce(other)))

    def __rsub__(self, other):
        return self.ring.add(self.ring.coerce(other), self.ring.neg(self))

    def __mul__(self, other):
        return self.ring.mul(self, self.ring.coerce(other))

    def __rmul__(self, other):
        return self.ring.mul(self.ring.coerce(other), self)

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __str__(self) -> str:
        return self.ring.render(self)

    __repr__ = __str__


class Localization:
    """The localization A_f of a presented algebra at a homogeneous element.

    For odd f the element g = f^2 is inverted instead (same localization);
    all denominators are then even and central.
    """

    def __init__(self, alg: PresentedAlgebra, f: Element, window: Optional[int] = None,
                 max_level: int = 48):
        h = is_homogeneous(f)
        if h == "inhomogeneous":
            raise DegreeMismatch(f"cannot localize at inhomogeneous {f}")
        self.alg = alg
        self.base = alg.base
        self.f = f
        self.g = f * f if isinstance(h, int) and h % 2 else f
        hg = is_homogeneous(self.g)
        self.delta = hg if isinstance(hg, int) else 0
        self.window = window if window is not None else 3 + alg.free.ngens + max(map(abs, alg.free.degrees), default=0)
        self.max_level = max_level
        self._gp = [alg.one()]
        self._cache: dict = {}
        free = alg.free
        name = "z"
        while name in free.generators:
            name += "_"
        self.inv_name = name

    def __repr__(self) -> str:
        return f"({self.alg!r})[1/({self.f})]"

    # arithmetic

    def gpow(self, n: int) -> Element:
        while len(self._gp) <= n:
            self._gp.append(self._gp[-1] * self.g)
        return self._gp[n]

    def coerce(self, x) -> LocElement:
        if isinstance(x, LocElement):
            assert x.ring is self, "fraction from another localization"
            return x
        if isinstance(x, Element):
            return LocElement(self, x, 0)
        return LocElement(self, self.alg.scalar(x), 0)

    def element(self, num: Element, k: int = 0) -> LocElement:
        return LocElement(self, num, k)

    def one(self) -> LocElement:
        return LocElement(self, self.alg.one(), 0)

    def zero(self) -> LocElement:
        return LocElement(self, self.alg.zero(), 0)

    def scalar(self, c) -> LocElement:
        return LocElement(self, self.alg.scalar(c), 0)

    def gen(self, name) -> LocElement:
        return LocElement(self, self.alg.gen(name), 0)

    def gens(self) -> list[LocElement]:
        return [LocElement(self, x, 0) for x in self.alg.gens()]

    def inverse_of_denominator(self) -> LocElement:
        """The fraction 1/g."""
        return LocElement(self, self.alg.one(), 1)

    def add(self, a: LocElement, b: LocElement) -> LocElement:
        k = max(a.k, b.k)
        num = a.num * self.gpow(k - a.k) + b.num * self.gpow(k - b.k)
        return LocElement(self, num, k)

    def neg(self, a: LocElement) -> LocElement:
        return LocElement(self, -a.num, a.k)

    def mul(self, a: LocElement, b: LocElement) -> LocElement:
        return LocElement(self, a.num * b.num, a.k + b.k)

    def scale(self, c, a: LocElement) -> LocElement:
        return LocElement(self, self.alg.scalar(c) * a.num, a.k)

    def degree_of(self, a: LocElement):
        h = is_homogeneous(a.num)
        if not isinstance(h, int):
            return h
        return h - a.k * self.delta

    def homogeneous_parts(self, a: LocElement) -> dict[int, LocElement]:
        return {d - a.k * self.delta: LocElement(self, p, a.k)
                for d, p in a.num.homogeneous_parts().items()}

    def is_zero(self, a: LocElement) -> bool:
        return all(self.piece(d).element_is_zero(p) for d, p in self.homogeneous_parts(a).items())

    def equal(self, a: LocElement, b: LocElement) -> bool:
        return self.is_zero(self.add(a, self.neg(b)))

    def render(self, a: LocElement) -> str:
        if a.k == 0:
            return str(a.num)
        return f"({a.num}) / ({self.g})^{a.k}"

    def lift(self, a: LocElement) -> Element:
        free, _, _ = self.presentation()
        emb = _embed(a.num, free)
        return emb * free.gen(self.inv_name) ** a.k

    def presentation(self):
        """(free algebra with an extra inverse generator, relations, evaluation)."""
        if "presentation" not in self._cache:
            old = self.alg.free
            free = FreeDiracAlgebra(self.base, list(old.generators) + [(self.inv_name, -self.delta)])
            rels = [_embed(r, free) for r in self.alg.relations.generators]
            rels.append(free.gen(self.inv_name) * _embed(self.g, free) - free.one())
            zi = free.ngens - 1

            def evaluate(p: Element) -> LocElement:
                out = self.zero()
                for m, c in p.terms.items():
                    out = self.add(out, LocElement(self, old.monomial(m[:zi], c), m[zi]))
                return out

            self._cache["presentation"] = (free, rels, evaluate)
        return self._cache["presentation"]

    def odd_generators(self) -> list[LocElement]:
        return [LocElement(self, x, 0) for x in self.alg.odd_generators()]

    def support_sign(self) -> Optional[int]:
        return None

    # degreewise colimits

    def _level(self, d: int, k: int) -> Piece:
        return self.alg.piece(d + k * self.delta)

    def _push(self, d: int, k: int, n: int) -> list[dict]:
        """Images of the level-k basis of degree d under multiplication by g^n."""
        src = self._level(d, k)
        gn = self.gpow(n)
        return [(m * gn).terms for m in src.spanning]

    def _torsion(self, d: int, k: int, n: int) -> list[list]:
        """Kernel of g^n on the level-k piece (as coefficient vectors)."""
        src = self._level(d, k)
        tgt = self._level(d, k + n)
        if not src.coords:
            return []
        imgs = [tgt.dense(v) for v in self._push(d, k, n)]
        return preimage(imgs, tgt.columns(), len(tgt.coords), self.base)

    def _quotient_rels(self, d: int, k: int) -> list[list]:
        src = self._level(d, k)
        return src.columns() + self._torsion(d, k, self.window)

    def _stable_at(self, d: int, k: int) -> bool:
        src = self._level(d, k)
        n = len(src.coords)
        base = self.base
        t1 = span_basis(self._quotient_rels(d, k), n, base)
        t2 = span_basis(src.columns() + self._torsion(d, k, self.window + 1), n, base)
        if not _same_span(t1, t2, base):
            return False
        # surjectivity of level k -> k+1 modulo torsion
        tgt = self._level(d, k + 1)
        imgs = [tgt.dense(v) for v in self._push(d, k, 1)]
        return quotient_invariants(len(tgt.coords), imgs + self._quotient_rels(d, k + 1), base).is_zero()

    def stable_level(self, d: int) -> int:
        key = ("level", d)
        if key in self._cache:
            return self._cache[key]
        w = self.window
        k = self._first_level(d)
        run = 0
        start = 0
        while k <= self.max_level:
            if self._stable_at(d, k):
                if run == 0:
                    start = k
                run += 1
                if run > w:
                    self._cache[key] = start
                    return start
            else:
                run = 0
            k += 1
        raise PieceNotFinite(f"degree {d} piece of {self} did not stabilize by level {self.max_level}")

    def _first_level(self, d: int) -> int:
        """Smallest level whose degree lies in the support of the algebra."""
        sign = self.alg.support_sign()
        if self.delta == 0 or sign == 0:
            return 0
        k = 0
        while (d + k * self.delta) * sign < 0 and k <= self.max_level:
            k += 1
        return k

    def piece(self, d: int) -> Piece:
        key = ("piece", d)
        if key in self._cache:
            return self._cache[key]
        K = self.stable_level(d)
        lvl = self._level(d, K)
        tors = self._torsion(d, K, self.window)
        rels = list(lvl.relations) + [{c: v for c, v in zip(lvl.coords, t) if v} for t in tors]
        spanning = [LocElement(self, m, K) for m in lvl.spanning]

        def vector(x: LocElement) -> dict:
            x = self.coerce(x)
            h = self.degree_of(x)
            if h == "zero":
                return {}
            if h != d:
                raise DegreeMismatch(f"{self.render(x)} is not of degree {d}")
            if x.k <= K:
                return (x.num * self.gpow(K - x.k)).terms
            # divide by g^(x.k - K) using the stable isomorphism
            n = x.k - K
            tgt = self._level(d, x.k)
            imgs = [tgt.dense(v) for v in self._push(d, K, n)]
            rel = self._quotient_rels(d, x.k)
            cols = imgs + rel
            m = [[cols[j][i] for j in range(len(cols))] for i in range(len(tgt.coords))]
            sol = solve_linear(m, tgt.dense(x.num.terms), self.base, cols=len(cols))
            if sol is None:
                raise PieceNotFinite(f"could not divide {self.render(x)} at level {K}")
            return {c: v for c, v in zip(lvl.coords, sol[:len(imgs)]) if v}

        p = Piece(self.base, d, lvl.coords, rels, spanning, vector)
        self._cache[key] = p
        return p


def _embed(a: Element, free: FreeDiracAlgebra) -> Element:
    extra = free.ngens - a.algebra.ngens
    return free.element({m + (0,) * extra: c for m, c in a.terms.items()})


def _same_span(a, b, base) -> bool:
    return all(in_span(v, b, base) for v in a) and all(in_span(v, a, base) for v in b)


# ring helpers shared by every graded ring class

def ring_of(R):
    """The computational ring behind a Dirac field datum, or R itself."""
    return R.ring if isinstance(R, DiracField) else R


def inverse(R, y):
    """A two-sided inverse of the homogeneous element y, or None."""
    R = ring_of(R)
    e = R.degree_of(y)
    if e == "zero" or e == "inhomogeneous":
        return None
    src = R.piece(-e)
    tgt = R.piece(0)
    imgs = [tgt.dense(tgt.vector(R.mul(y, b))) for b in src.spanning]
    n = len(tgt.coords)
    cols = imgs + tgt.columns()
    if not cols:
        return None
    m = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
    sol = solve_linear(m, tgt.dense(tgt.vector(R.one())), R.base, cols=len(cols))
    if sol is None:
        return None
    w = R.zero()
    for c, b in zip(sol, src.spanning):
        if c:
            w = R.add(w, R.scale(c, b))
    return w


def is_unit(R, y) -> bool:
    return inverse(R, y) is not None


def ring_gens(R) -> list:
    return ring_of(R).gens()


def odd_module_generators(R) -> list[tuple[object, int]]:
    """Generators of R over its even part: 1 and products of an odd number of odd generators."""
    R = ring_of(R)
    odd = R.odd_generators()
    out = [(R.one(), 0)]
    for size in range(1, len(odd) + 1, 2):
        for S in combinations(odd, size):
            x = R.one()
            for y in S:
                x = R.mul(x, y)
            h = R.degree_of(x)
            if isinstance(h, int):
                out.append((x, h))
    return out


@dataclass(frozen=True)
class DiracField:
    """Classification datum of a Dirac field: k0, or k0[t^(+-1)] with t of degree d.

    ``ext_degree`` records [k0 : F_p] for finite residue fields; arithmetic
    is available only for prime fields and the rationals.
    """

    base: BaseRing
    gen: Optional[tuple[str, int]] = None
    ext_degree: int = 1

    def __post_init__(self):
        if not self.base.is_field:
            raise ValueError("a Dirac field needs a field in degree 0")
        if self.gen is not None:
            d = self.gen[1]
            if d == 0:
                raise ValueError("the periodicity generator must have nonzero degree")
            if d % 2 and self.base.characteristic != 2:
                raise ValueError(f"odd periodicity degree {d} needs characteristic 2")

    @property
    def ring(self):
        if self.ext_degree != 1:
            raise ValueError("arithmetic over non-prime residue fields is not supported")
        cache = _FIELD_RINGS
        if self not in cache:
            if self.gen is None:
                cache[self] = PresentedAlgebra.free_on(self.base, [])
            else:
                alg = PresentedAlgebra.free_on(self.base, [self.gen])
                cache[self] = Localization(alg, alg.gen(self.gen[0]))
        return cache[self]

    @property
    def period(self) -> int:
        return abs(self.gen[1]) if self.gen else 0

    def describe(self) -> str:
        k0 = str(self.base) if self.ext_degree == 1 else f"F{self.base.p}^{self.ext_degree}"
        if self.gen is None:
            return k0
        return f"{k0}[{self.gen[0]}^(+-1)], deg {self.gen[0]} = {self.gen[1]}"

    def __str__(self) -> str:
        return self.describe()


_FIELD_RINGS: dict = {}


class AlgebraMap:
    """A degree-preserving map of Dirac rings given on presentation generators.

    ``images`` assigns a target element to each generator of the source's
    underlying presented algebra (for a localization ``A_f`` the generators
    of A); the image of f must then be a unit.
    """

    def __init__(self, source, target, images: Union[Mapping[str, object], Sequence], check: bool = True,
                 kind: Optional[str] = None):
        self.source_datum = source
        self.target_datum = target
        self.source = ring_of(source)
        self.target = ring_of(target)
        src_alg = self.source.alg if isinstance(self.source, Localization) else self.source
        names = src_alg.free.names
        if isinstance(images, Mapping):
            imgs = [images[n] for n in names]
        else:
            imgs = list(images)
        if len(imgs) != len(names):
            raise ValueError("need one image per source generator")
        self.images = [self._coerce_target(x) for x in imgs]
        self.kind = kind
        self._ginv = None
        self._powers: list[list] = [[self.target.one()] for _ in self.images]
        if check:
            self.check()

    def _coerce_target(self, x):
        T = self.target
        if isinstance(T, Localization):
            return T.coerce(x)
        if not isinstance(x, Element):
            return T.scalar(x)
        return x

    def check(self):
        src_alg = self.source.alg if isinstance(self.source, Localization) else self.source
        if self.source.base != self.target.base:
            raise ValueError("source and target have different base rings")
        for name, d, img in zip(src_alg.free.names, src_alg.free.degrees, self.images):
            h = self.target.degree_of(img)
            if h not in ("zero", d):
                raise DegreeMismatch(f"image of {name} has degree {h}, expected {d}")
        for r in src_alg.relations.generators:
            if not self.target.is_zero(self._eval(r)):
                raise ValueError(f"relation {r} does not map to zero")
        if isinstance(self.source, Localization):
            if self.denominator_inverse() is None:
                raise ValueError(f"image of {self.source.g} is not a unit")

    def _eval(self, p: Element):
        T = self.target
        out = T.zero()
        for m, c in p.terms.items():
            term = T.scalar(c)
            for i, e in enumerate(m):
                if e:
                    pw = self._powers[i]
                    while len(pw) <= e:
                        pw.append(T.mul(pw[-1], self.images[i]))
                    term = T.mul(term, pw[e])
            out = T.add(out, term)
        return out

    def denominator_inverse(self):
        if self._ginv is None:
            self._ginv = inverse(self.target, self._eval(self.source.g))
        return self._ginv

    def apply(self, x):
        if isinstance(self.source, Localization):
            x = self.source.coerce(x)
            out = self._eval(x.num)
            if x.k:
                gi = self.denominator_inverse()
                for _ in range(x.k):
                    out = self.target.mul(out, gi)
            return out
        return self._eval(x)

    __call__ = apply

    def is_identity(self) -> bool:
        if ring_of(self.source) is not ring_of(self.target):
            return False
        return all(self.target.equal(img, g) for img, g in zip(self.images, ring_gens(self.target)))

    def source_presentation_images(self) -> list:
        """Images of the source presentation generators, including an inverse generator."""
        out = list(self.images)
        if isinstance(self.source, Localization):
            out.append(self.denominator_inverse())
        return out


def identity_map(R) -> AlgebraMap:
    return AlgebraMap(R, R, ring_gens(R), kind="identity")


def localization_map(alg: PresentedAlgebra, f: Element, **kw) -> AlgebraMap:
    L = Localization(alg, f, **kw)
    return AlgebraMap(alg, L, [L.gen(n) for n in alg.names], kind="localization")


def field_extension_map(K: DiracField, L: DiracField, image_coefficient, exponent: int) -> AlgebraMap:
    """K = k0[t^(+-1)] -> L = k0[u^(+-1)] sending t to c*u^e."""
    assert K.gen is not None and L.gen is not None
    if K.gen[1] != exponent * L.gen[1]:
        raise DegreeMismatch("deg t must equal e * deg u")
    Lr = L.ring
    u = Lr.gen(L.gen[0])
    img = Lr.scale(image_coefficient, u ** exponent)
    phi = AlgebraMap(K, L, [img], kind="field_extension")
    phi.extension_data = (Lr.base.coerce(image_coefficient), exponent)
    return phi
