"""Descent along Zariski covers A -> prod A_{f_i}.

Sections over A_{g_i} of degree d are handled through numerators in
degree d + k*deg(g_i) at a level k; two numerators are identified once a
power g^N kills their difference. A gluing map g_ij : M_i -> M_j over
A_{g_i g_j} is a matrix of numerators G together with an exponent e,
meaning G / (g_i g_j)^e.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exactlin import in_span, preimage, span_basis, subquotient_invariants
from .gmod import PresentedModule, Verdict, _degree_range
from .rings import ring_of
from .spectra import LevelEqualizer, SpecSpace, _support_degrees, spec_finite, unit_certificate

__all__ = [
    "InvalidCover", "CocycleError", "ZariskiCover", "DescentDatum", "DescentResult", "amitsur_check",
    "descend_module", "truncated_limit", "totalization_agreement", "opens_limit_check", "module_to_json",
]


class InvalidCover(ValueError):
    pass


class CocycleError(ValueError):
    def __init__(self, triple, degree):
        super().__init__(f"cocycle condition fails for {triple} in degree {degree}")
        self.triple = triple
        self.degree = degree


class ZariskiCover:
    """Homogeneous f_1..f_r generating the unit ideal, with the certificate kept."""

    def __init__(self, algebra, elements: Sequence):
        R = ring_of(algebra)
        self.algebra = R
        self.elements = [R.coerce(f) for f in elements]
        for f in self.elements:
            if not isinstance(R.degree_of(f), int):
                raise InvalidCover(f"{R.render(f)} is zero or not homogeneous")
        cert = unit_certificate(R, self.elements)
        if cert is None:
            raise InvalidCover("the elements do not generate the unit ideal")
        self.certificate = cert
        self.denominators = []
        for f in self.elements:
            h = R.degree_of(f)
            self.denominators.append(R.mul(f, f) if h % 2 else f)
        self.deltas = [R.degree_of(g) if isinstance(R.degree_of(g), int) else 0 for g in self.denominators]
        self._pw: dict = {}

    def __len__(self) -> int:
        return len(self.elements)

    def gpow(self, i: int, n: int):
        key = (i, n)
        if key not in self._pw:
            R = self.algebra
            out = R.one()
            for _ in range(n):
                out = R.mul(out, self.denominators[i])
            self._pw[key] = out
        return self._pw[key]

    def gprod(self, idx: Sequence[int], n: int):
        out = self.algebra.one()
        for i in idx:
            out = self.algebra.mul(out, self.gpow(i, n))
        return out


def amitsur_check(cover: ZariskiCover, bound: int = 32, levels: int = 3, power: int = 4) -> Verdict:
    """Degreewise exactness of 0 -> A -> prod A_{f_i} => prod A_{f_i f_j}."""
    R = cover.algebra
    eq = LevelEqualizer(R, cover.elements, power)
    for d in _support_degrees(R, bound):
        if not eq.injective(d):
            return Verdict("false", {"degree": d, "reason": "not injective"}, bound)
        for k in range(levels + 1):
            if not eq.glues(d, k):
                return Verdict("false", {"degree": d, "level": k}, bound)
    return Verdict("true", bound=bound, detail=f"levels 0..{levels}, powers up to {power}")


@dataclass
class Gluing:
    images: list  # image numerators of the source generators, as target module elements
    exponent: int = 0


class DescentDatum:
    """Modules M_i (numerator presentations over A) with gluing maps g_ij : M_i -> M_j."""

    def __init__(self, cover: ZariskiCover, modules: Sequence[PresentedModule],
                 gluing: dict, power: int = 4):
        self.cover = cover
        self.modules = list(modules)
        if len(self.modules) != len(cover):
            raise ValueError("one module per cover element")
        self.gluing: dict = {}
        for (i, j), g in gluing.items():
            if not isinstance(g, Gluing):
                images, e = g
                g = Gluing([self.modules[j].element(x) for x in images], e)
            self.gluing[(i, j)] = g
        for i, M in enumerate(self.modules):
            self.gluing.setdefault((i, i), Gluing([M.gen(a) for a in range(M.ngens)], 0))
        self.power = power

    @classmethod
    def trivial(cls, cover: ZariskiCover, M: PresentedModule, power: int = 4) -> "DescentDatum":
        r = len(cover)
        ident = Gluing([M.gen(a) for a in range(M.ngens)], 0)
        return cls(cover, [M] * r, {(i, j): ident for i in range(r) for j in range(r)}, power)

    def apply(self, i: int, j: int, m):
        """Numerator of g_ij applied to a numerator m of M_i (denominator (g_i g_j)^e)."""
        g = self.gluing[(i, j)]
        T = self.modules[j]
        out = T.zero()
        for c, img in zip(m, g.images):
            if self.cover.algebra.degree_of(c) != "zero":
                out = T.add(out, T.act(c, img))
        return out

    def check_cocycle(self):
        """g_il = g_jl o g_ij over A_{g_i g_j g_l}, tested on generators."""
        R = self.cover.algebra
        cv = self.cover
        r = len(cv)
        N = self.power
        for i, j, l in itertools.product(range(r), repeat=3):
            Mi, Ml = self.modules[i], self.modules[l]
            e1 = self.gluing[(i, l)].exponent
            e2 = self.gluing[(i, j)].exponent
            e3 = self.gluing[(j, l)].exponent
            for a in range(Mi.ngens):
                lhs = self.gluing[(i, l)].images[a]
                mid = self.gluing[(i, j)].images[a]
                rhs = self.apply(j, l, mid)
                # lhs / (g_i g_l)^e1  versus  rhs / (g_i^e2 g_j^(e2+e3) g_l^e3)
                left = Ml.act(R.mul(R.mul(cv.gpow(i, e2), cv.gpow(j, e2 + e3)), cv.gpow(l, e3)), lhs)
                right = Ml.act(R.mul(cv.gpow(i, e1), cv.gpow(l, e1)), rhs)
                diff = Ml.add(left, Ml.neg(right))
                killed = Ml.act(cv.gprod((i, j, l), N), diff)
                if not Ml.is_zero(killed):
                    raise CocycleError((i, j, l), Mi.generator_degrees[a])

    def to_json(self) -> dict:
        R = self.cover.algebra
        return {
            "cover": [R.render(f) for f in self.cover.elements],
            "modules": [module_to_json(M) for M in self.modules],
            "cocycle": [
                {"source": i, "target": j, "exponent": g.exponent,
                 "matrix": [[R.render(x) for x in img] for img in g.images]}
                for (i, j), g in sorted(self.gluing.items())
            ],
        }


def module_to_json(M: PresentedModule) -> dict:
    R = M.algebra
    return {
        "generator_degrees": list(M.generator_degrees),
        "relation_degrees": list(M.relation_degrees),
        "relations": [[R.render(x) for x in row] for row in M.relation_matrix],
    }


# the truncated cosimplicial limit

class _Blocks:
    def __init__(self, base):
        self.base = base
        self.blocks: list = []
        self.offsets: list[int] = []
        self.index: dict = {}
        self.size = 0

    def add(self, key, piece):
        self.index[key] = len(self.blocks)
        self.blocks.append(piece)
        self.offsets.append(self.size)
        self.size += len(piece.coords)

    def piece(self, key):
        return self.blocks[self.index[key]]

    def offset(self, key) -> int:
        return self.offsets[self.index[key]]

    def embed(self, key, vec: dict, out: list):
        p = self.piece(key)
        off = self.offset(key)
        for c, x in vec.items():
            pos = off + p.index[c]
            out[pos] = self.base.add(out[pos], x)


def _tuples(r: int, m: int):
    return list(itertools.product(range(r), repeat=m + 1))


def truncated_limit(datum: DescentDatum, d: int, k: int, depth: int):
    """Limit over the cosimplicial levels 0..depth, in degree d at level k.

    Returns (size of level 0, level-0 projection of the compatible families,
    the level-0 vectors that vanish after localization).
    """
    cv = datum.cover
    R = cv.algebra
    base = R.base
    r = len(cv)
    N = datum.power
    mods = datum.modules
    unknown = _Blocks(base)
    for m in range(depth + 1):
        for I in _tuples(r, m):
            deg = d + k * sum(cv.deltas[i] for i in I)
            unknown.add(I, mods[I[0]].piece(deg))
    constraints = _Blocks(base)
    rows: list[list] = []  # per unknown spanning vector: dict target key -> module element

    terms: dict = {}

    def contribute(target_key, target_piece, src_key, fn):
        if target_key not in constraints.index:
            constraints.add(target_key, target_piece)
        terms.setdefault(src_key, []).append((target_key, fn))

    for m in range(1, depth + 1):
        for I in _tuples(r, m):
            i0 = I[0]
            M0 = mods[i0]
            gI = cv.gprod(I, N)
            for j in range(m + 1):
                J = I[:j] + I[j + 1:]
                if j >= 1:
                    deg = d + (k + N) * sum(cv.deltas[i] for i in I)
                    key = ("face", I, j)
                    tp = M0.piece(deg)
                    mult = R.mul(gI, cv.gpow(I[j], k))
                    contribute(key, tp, J, lambda x, mult=mult, M0=M0: M0.act(mult, x))
                    contribute(key, tp, I, lambda x, gI=gI, M0=M0: M0.neg(M0.act(gI, x)))
                else:
                    i1 = I[1]
                    e = datum.gluing[(i1, i0)].exponent
                    deg = d + (k + N) * sum(cv.deltas[i] for i in I) + e * (cv.deltas[i0] + cv.deltas[i1])
                    key = ("face", I, 0)
                    tp = M0.piece(deg)
                    mult = R.mul(gI, cv.gpow(i0, k))
                    other = R.mul(gI, R.mul(cv.gpow(i0, e), cv.gpow(i1, e)))
                    contribute(key, tp, J,
                               lambda x, mult=mult, M0=M0, i1=i1, i0=i0: M0.act(mult, datum.apply(i1, i0, x)))
                    contribute(key, tp, I, lambda x, other=other, M0=M0: M0.neg(M0.act(other, x)))
    for m in range(depth):
        for I in _tuples(r, m):
            M0 = mods[I[0]]
            gI = cv.gprod(I, N)
            for j in range(m + 1):
                J = I[:j + 1] + I[j:]
                deg = d + k * sum(cv.deltas[i] for i in J) + N * sum(cv.deltas[i] for i in I)
                key = ("degeneracy", I, j)
                tp = M0.piece(deg)
                mult = R.mul(gI, cv.gpow(I[j], k))
                contribute(key, tp, J, lambda x, gI=gI, M0=M0: M0.act(gI, x))
                contribute(key, tp, I, lambda x, mult=mult, M0=M0: M0.neg(M0.act(mult, x)))

    images = []
    for src_key, piece in zip(list(unknown.index), unknown.blocks):
        for b in piece.spanning:
            v = [base.zero()] * constraints.size
            for tkey, fn in terms.get(src_key, []):
                constraints.embed(tkey, constraints.piece(tkey).vector(fn(b)), v)
            images.append(v)
    crel = []
    for key, piece in zip(list(constraints.index), constraints.blocks):
        for col in piece.columns():
            w = [base.zero()] * constraints.size
            off = constraints.offset(key)
            w[off:off + len(col)] = col
            crel.append(w)
    if constraints.size:
        families = preimage(images, crel, constraints.size, base)
    else:
        families = [[base.one() if a == b else base.zero() for a in range(unknown.size)]
                    for b in range(unknown.size)]
    n0 = sum(len(unknown.piece((i,)).coords) for i in range(r))
    proj = [f[:n0] for f in families if any(f[:n0])]
    kill = []
    for i in range(r):
        key = (i,)
        p = unknown.piece(key)
        M = mods[i]
        deg = d + k * cv.deltas[i]
        tgt = M.piece(deg + N * cv.deltas[i])
        imgs = [tgt.dense(tgt.vector(M.act(cv.gpow(i, N), b))) for b in p.spanning]
        ker = preimage(imgs, tgt.columns(), len(tgt.coords), base) if p.coords else []
        for v in ker + p.columns():
            w = [base.zero()] * n0
            off = unknown.offset(key)
            w[off:off + len(v)] = v
            kill.append(w)
    return n0, proj, kill


def _levels0(datum: DescentDatum, d: int, k: int):
    cv = datum.cover
    return [datum.modules[i].piece(d + k * cv.deltas[i]) for i in range(len(cv))]


@dataclass
class DescentResult:
    module: Optional[PresentedModule]
    pieces: dict
    bound: int
    level: int
    report: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"bound": self.bound, "level": self.level,
               "pieces": {str(d): inv for d, inv in sorted(self.pieces.items())},
               "report": list(self.report)}
        if self.module is not None:
            out["module"] = module_to_json(self.module)
        return out


def _equalizer_invariants(datum: DescentDatum, d: int, k: int, depth: int = 1):
    n0, proj, kill = truncated_limit(datum, d, k, depth)
    base = datum.cover.algebra.base
    space = span_basis(proj + kill, n0, base)
    return subquotient_invariants(n0, space, kill, base), (n0, proj, kill)


def _candidate_images(datum: DescentDatum, candidate: PresentedModule, maps, d: int, k: int) -> list[list]:
    """Images of the candidate's degree-d spanning set in level-0 numerator coordinates."""
    cv = datum.cover
    pieces = _levels0(datum, d, k)
    base = cv.algebra.base
    out = []
    for b in candidate.piece(d).spanning:
        v = []
        for i, p in enumerate(pieces):
            img = maps[i](b) if maps else b
            img = datum.modules[i].act(cv.gpow(i, k), img)
            v.extend(p.dense(p.vector(img)))
        out.append(v)
    return out


def descend_module(datum: DescentDatum, bound: int = 32, level: int = 2,
                   candidate: Optional[PresentedModule] = None, maps=None) -> DescentResult:
    """Glue the datum degreewise, and verify a candidate A-module against the result.

    ``maps[i]`` sends candidate elements to numerators of M_i (identity when omitted).
    """
    datum.check_cocycle()
    cv = datum.cover
    R = cv.algebra
    base = R.base
    degrees = _module_degrees(datum, bound)
    pieces = {}
    report = []
    for d in degrees:
        inv, (n0, proj, kill) = _equalizer_invariants(datum, d, level)
        pieces[d] = inv.render(base)
        if candidate is not None:
            imgs = _candidate_images(datum, candidate, maps, d, level)
            cp = candidate.piece(d)
            span_e = span_basis(proj + kill, n0, base)
            onto = all(in_span(v, imgs + kill, base) for v in span_e)
            inside = all(in_span(v, span_e, base) for v in imgs)
            ker = preimage(imgs, kill, n0, base) if imgs else []
            injective = all(cp.element_is_zero(_combine(candidate, z, cp.spanning)) for z in ker)
            if not (onto and inside and injective):
                report.append({"degree": d, "onto": onto, "inside": inside, "injective": injective})
    module = candidate if candidate is not None and not report else None
    if candidate is None and R.support_sign() == 0:
        module = _module_from_group(R, pieces, datum, level)
    status = "verified" if candidate is None or not report else "mismatch"
    return DescentResult(module, pieces, bound, level, report or [status])


def _combine(M, coeffs, elements):
    out = M.zero()
    for c, b in zip(coeffs, elements):
        if c:
            out = M.add(out, M.scale(c, b))
    return out


def _module_degrees(datum: DescentDatum, bound: int) -> list[int]:
    if datum.cover.algebra.support_sign() == 0:
        return sorted({e for M in datum.modules for e in M.generator_degrees})
    out = set()
    for M in datum.modules:
        out.update(_degree_range(M, bound))
    return sorted(out)


def _module_from_group(R, pieces: dict, datum, level) -> Optional[PresentedModule]:
    """Over a trivially graded ring with integer or field base: rebuild from invariants."""
    inv, _ = _equalizer_invariants(datum, 0, level)
    n = inv.rank + len(inv.torsion)
    rows = []
    for t, q in enumerate(inv.torsion):
        row = [R.zero()] * n
        row[inv.rank + t] = R.scalar(q)
        rows.append(row)
    return PresentedModule(R, [0] * n, rows, [0] * len(rows))


def totalization_agreement(datum: DescentDatum, degrees: Sequence[int], level: int = 1,
                           depths: Sequence[int] = (2, 3)) -> dict:
    """Compare the level-0 projections of the limits over truncations of the given depths."""
    base = datum.cover.algebra.base
    out = {}
    for d in degrees:
        spans = []
        for n in depths:
            n0, proj, kill = truncated_limit(datum, d, level, n)
            spans.append((span_basis(proj + kill, n0, base), kill))
        same = all(
            all(in_span(v, spans[0][0], base) for v in s) and all(in_span(v, s, base) for v in spans[0][0])
            for s, _ in spans[1:])
        out[d] = same
    return out


# open sets

def _open_sets(space: SpecSpace, subset: Sequence[int]) -> list[frozenset]:
    """Subsets of the given points closed under generization (within the subset)."""
    pts = list(subset)
    below = {j: {i for i, jj in space.specializations if jj == j} for j in pts}
    out = []
    for mask in range(1 << len(pts)):
        U = frozenset(p for t, p in enumerate(pts) if mask >> t & 1)
        if all(i in U for j in U for i in below[j] if i in subset):
            out.append(U)
    return out


def opens_limit_check(space_or_alg, cover_opens: Optional[Sequence[Sequence[int]]] = None,
                      cover: Optional[Sequence] = None) -> Verdict:
    """Open(X) -> prod Open(X_i) => prod Open(X_i cap X_j) is an equalizer."""
    if isinstance(space_or_alg, SpecSpace):
        space = space_or_alg
    else:
        space = spec_finite(space_or_alg, opens=list(cover or []))
    if cover_opens is None:
        R = ring_of(space_or_alg)
        cover_opens = [space.opens[R.render(R.coerce(f))] for f in cover]
    pieces = [frozenset(c) for c in cover_opens]
    allpts = frozenset(space.ids())
    if frozenset().union(*pieces) != allpts:
        return Verdict("false", {"reason": "opens do not cover"})
    opens_x = _open_sets(space, sorted(allpts))
    local = [_open_sets(space, sorted(p)) for p in pieces]
    families = []
    for fam in itertools.product(*local):
        if all(fam[i] & pieces[j] == fam[j] & pieces[i] for i in range(len(pieces)) for j in range(len(pieces))):
            families.append(fam)
    image = {tuple(U & p for p in pieces) for U in opens_x}
    if len(image) != len(opens_x):
        return Verdict("false", {"reason": "restriction not injective"})
    if set(families) != image:
        return Verdict("false", {"reason": "compatible family not glued"})
    return Verdict("true", {"opens": len(opens_x), "families": len(families)})


def truncated_integer_spec(primes: Sequence[int]) -> SpecSpace:
    """The points (0) and (p) of Spec Z for the listed primes, for display-sized checks."""
    from .spectra import GradedPrimeIdeal
    pts = [GradedPrimeIdeal(())] + [GradedPrimeIdeal((p,)) for p in primes]
    spec = [(i, i) for i in range(len(pts))] + [(0, j) for j in range(1, len(pts))]
    return SpecSpace(pts, spec, {})


def integer_cover_opens(primes: Sequence[int], cover: Sequence[int]) -> list[list[int]]:
    """|X_n| inside the truncated spectrum: (0) and the listed primes not dividing n."""
    return [[0] + [j + 1 for j, p in enumerate(primes) if n % p] for n in cover]
