"""Finitely presented graded modules and their homological invariants.

A module element is a tuple of ring elements, the coefficients of the
generators written on the left. Every computation reduces to one degree
at a time: ``M.piece(d)`` is a finite base-module whose i-th spanning
element is the i-th ambient coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactlin import (ModuleInvariants, in_span, preimage, quotient_invariants, solve_linear,
                       span_basis, subquotient_invariants)
from .freealg import AlgebraMismatch, DegreeMismatch, Element
from .grading import Spin, is_odd, koszul_sign
from .presalg import GradedPiece, Piece, PresentedAlgebra
from .rings import Localization, odd_module_generators, ring_of

DEFAULT_BOUND = 32


class UnsupportedClass(ValueError):
    pass


@dataclass
class Verdict:
    """A decision with an optional witness and the degree bound it was checked to."""

    status: str
    witness: Optional[dict] = None
    bound: Optional[int] = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.bound is not None:
            out["bound"] = self.bound
        if self.detail:
            out["detail"] = self.detail
        return out

    def render(self) -> str:
        s = self.status
        if self.witness:
            s += " (" + ", ".join(f"{k}={v}" for k, v in sorted(self.witness.items())) + ")"
        if self.bound is not None:
            s += f" [verified to degree {self.bound}]"
        return s


def support_range(R) -> Optional[tuple[Optional[int], Optional[int]]]:
    """Bounds (lo, hi) on the degrees where R can be nonzero; None entries are unbounded."""
    sign = R.support_sign()
    if sign == -1:
        return (None, 0)
    if sign == 1:
        return (0, None)
    if sign == 0:
        return (0, 0)
    return (None, None)


def _piece_elements(piece: Piece, coeffs: Sequence, R):
    out = R.zero()
    for c, b in zip(coeffs, piece.spanning):
        if c:
            out = R.add(out, R.scale(c, b))
    return out


class PresentedModule:
    """Cokernel of a map of twisted free modules over a graded ring."""

    def __init__(self, algebra, generator_degrees: Sequence[int], relation_matrix: Sequence[Sequence] = (),
                 relation_degrees: Optional[Sequence[int]] = None):
        self.algebra = ring_of(algebra)
        R = self.algebra
        self.base = R.base
        self.generator_degrees = [int(e) for e in generator_degrees]
        n = len(self.generator_degrees)
        rows = []
        degs = []
        for i, row in enumerate(relation_matrix):
            row = [R.coerce(x) for x in row]
            if len(row) != n:
                raise ValueError(f"relation {i} has {len(row)} entries, expected {n}")
            if relation_degrees is not None:
                rd = int(relation_degrees[i])
            else:
                rd = None
                for x, e in zip(row, self.generator_degrees):
                    h = R.degree_of(x)
                    if isinstance(h, int):
                        rd = h + e
                        break
                if rd is None:
                    continue
            for j, (x, e) in enumerate(zip(row, self.generator_degrees)):
                h = R.degree_of(x)
                if h == "zero":
                    continue
                if h != rd - e:
                    raise DegreeMismatch(f"entry ({i},{j}) has degree {h}, expected {rd - e}")
            rows.append(row)
            degs.append(rd)
        self.relation_matrix = rows
        self.relation_degrees = degs
        self._cache: dict = {}

    @classmethod
    def free(cls, algebra, degrees: Sequence[int]) -> "PresentedModule":
        return cls(algebra, degrees)

    @classmethod
    def cyclic(cls, algebra, ideal: Sequence, degree: int = 0) -> "PresentedModule":
        """The module A/(ideal), generated in the given degree."""
        R = ring_of(algebra)
        rows = [[R.coerce(f)] for f in ideal]
        return cls(R, [degree], rows)

    def __repr__(self) -> str:
        return (f"PresentedModule(gens={self.generator_degrees}, "
                f"relations={len(self.relation_matrix)} over {self.algebra!r})")

    @property
    def ngens(self) -> int:
        return len(self.generator_degrees)

    # elements

    def zero(self) -> tuple:
        return tuple(self.algebra.zero() for _ in self.generator_degrees)

    def gen(self, j: int) -> tuple:
        R = self.algebra
        return tuple(R.one() if i == j else R.zero() for i in range(self.ngens))

    def element(self, coeffs: Sequence) -> tuple:
        return tuple(self.algebra.coerce(c) for c in coeffs)

    def add(self, m, n) -> tuple:
        return tuple(self.algebra.add(a, b) for a, b in zip(m, n))

    def neg(self, m) -> tuple:
        return tuple(self.algebra.neg(a) for a in m)

    def scale(self, c, m) -> tuple:
        return tuple(self.algebra.scale(c, a) for a in m)

    def act(self, a, m) -> tuple:
        return tuple(self.algebra.mul(a, x) for x in m)

    def degree_of(self, m) -> Union[int, str]:
        d = "zero"
        for x, e in zip(m, self.generator_degrees):
            h = self.algebra.degree_of(x)
            if h == "inhomogeneous":
                return h
            if h == "zero":
                continue
            if d == "zero":
                d = h + e
            elif d != h + e:
                return "inhomogeneous"
        return d

    def is_zero(self, m) -> bool:
        R = self.algebra
        parts: dict[int, list] = {}
        for j, (x, e) in enumerate(zip(m, self.generator_degrees)):
            for d, p in _homogeneous_parts(R, x).items():
                parts.setdefault(d + e, list(self.zero()))[j] = p
        return all(self.piece(d).element_is_zero(tuple(v)) for d, v in parts.items())

    def generators(self) -> list[tuple[tuple, int]]:
        return [(self.gen(j), e) for j, e in enumerate(self.generator_degrees)]

    def top_degree(self) -> Optional[int]:
        if not self.generator_degrees:
            return 0
        sign = self.algebra.support_sign()
        if sign in (-1, 0):
            return max(self.generator_degrees)
        return None

    def bottom_degree(self) -> Optional[int]:
        if not self.generator_degrees:
            return 0
        sign = self.algebra.support_sign()
        if sign in (1, 0):
            return min(self.generator_degrees)
        return None

    # degreewise realization

    def piece(self, d: int) -> Piece:
        key = ("piece", d)
        if key in self._cache:
            return self._cache[key]
        R = self.algebra
        blocks = [R.piece(d - e) for e in self.generator_degrees]
        coords = [(j, c) for j, p in enumerate(blocks) for c in p.coords]
        rels = [{(j, c): v for c, v in r.items()} for j, p in enumerate(blocks) for r in p.relations]
        for row, rd in zip(self.relation_matrix, self.relation_degrees):
            for b in R.piece(d - rd).spanning:
                vec: dict = {}
                for j, x in enumerate(row):
                    if R.degree_of(x) == "zero":
                        continue
                    prod = R.mul(b, x)
                    for c, v in blocks[j].vector(prod).items():
                        vec[(j, c)] = self.base.add(vec.get((j, c), self.base.zero()), v)
                vec = {k: v for k, v in vec.items() if v}
                if vec:
                    rels.append(vec)
        spanning = []
        for j, p in enumerate(blocks):
            for b in p.spanning:
                spanning.append(tuple(b if i == j else R.zero() for i in range(self.ngens)))

        def vector(m) -> dict:
            out = {}
            for j, x in enumerate(m):
                for c, v in blocks[j].vector(x).items():
                    out[(j, c)] = v
            return out

        piece = Piece(self.base, d, coords, rels, spanning, vector)
        self._cache[key] = piece
        return piece


def _homogeneous_parts(R, x) -> dict:
    if isinstance(R, Localization):
        return R.homogeneous_parts(x)
    return x.homogeneous_parts()


class RestrictedModule:
    """A ring B regarded as a module over A through a map phi: A -> B."""

    def __init__(self, phi, generators: Optional[Sequence[tuple[object, int]]] = None):
        self.phi = phi
        self.algebra = phi.source
        self.target = phi.target
        self.base = phi.target.base
        self._generators = list(generators) if generators is not None else None

    def __repr__(self) -> str:
        return f"RestrictedModule({self.target!r} over {self.algebra!r})"

    def piece(self, d: int) -> Piece:
        return self.target.piece(d)

    def zero(self):
        return self.target.zero()

    def add(self, m, n):
        return self.target.add(m, n)

    def neg(self, m):
        return self.target.neg(m)

    def scale(self, c, m):
        return self.target.scale(c, m)

    def act(self, a, m):
        return self.target.mul(self.phi.apply(a), m)

    def degree_of(self, m):
        return self.target.degree_of(m)

    def is_zero(self, m) -> bool:
        return self.target.is_zero(m)

    def generators(self):
        return self._generators

    def top_degree(self) -> Optional[int]:
        r = support_range(self.target)
        return r[1]

    def bottom_degree(self) -> Optional[int]:
        r = support_range(self.target)
        return r[0]


class ModuleMap:
    """A degree-preserving map given by the images of the source generators."""

    def __init__(self, source: PresentedModule, target, images: Sequence, check: bool = True):
        self.source = source
        self.target = target
        if len(images) != source.ngens:
            raise ValueError("need one image per source generator")
        if isinstance(target, PresentedModule):
            images = [target.element(x) for x in images]
        self.images = list(images)
        if check:
            self.check()

    def check(self):
        T = self.target
        for j, (x, e) in enumerate(zip(self.images, self.source.generator_degrees)):
            h = T.degree_of(x)
            if h not in ("zero", e):
                raise DegreeMismatch(f"image of generator {j} has degree {h}, expected {e}")
        for row, rd in zip(self.source.relation_matrix, self.source.relation_degrees):
            if not T.piece(rd).element_is_zero(self._combine(row)):
                raise ValueError("map does not respect the source relations")

    def _combine(self, coeffs):
        T = self.target
        out = T.zero()
        R = self.source.algebra
        for c, x in zip(coeffs, self.images):
            if R.degree_of(c) != "zero":
                out = T.add(out, T.act(c, x))
        return out

    def apply(self, m):
        return self._combine(m)

    __call__ = apply

    def matrix(self) -> list:
        return list(self.images)


def identity_module_map(M: PresentedModule) -> ModuleMap:
    return ModuleMap(M, M, [M.gen(j) for j in range(M.ngens)], check=False)


# constructions

def twist(M: PresentedModule, s: Union[Spin, int, Fraction]) -> PresentedModule:
    """The Serre twist M(s) with M(s)_k = M_{k+2s}."""
    if isinstance(s, Spin):
        shift = s.numerator
    else:
        two_s = Fraction(s) * 2
        if two_s.denominator != 1:
            raise ValueError(f"spin {s} is not a half-integer")
        shift = int(two_s)
    return PresentedModule(M.algebra, [e - shift for e in M.generator_degrees], M.relation_matrix,
                           [r - shift for r in M.relation_degrees])


def tensor(M: PresentedModule, N: PresentedModule) -> PresentedModule:
    """M tensor N over the common ring, with Koszul signs on generator-relation terms."""
    if M.algebra is not N.algebra and M.algebra != N.algebra:
        raise AlgebraMismatch("modules over different rings")
    R = M.algebra
    pairs = [(j, l) for j in range(M.ngens) for l in range(N.ngens)]
    idx = {p: i for i, p in enumerate(pairs)}
    degs = [M.generator_degrees[j] + N.generator_degrees[l] for j, l in pairs]
    rows, rdegs = [], []
    for row, rd in zip(M.relation_matrix, M.relation_degrees):
        for l, el in enumerate(N.generator_degrees):
            new = [R.zero()] * len(pairs)
            for j, x in enumerate(row):
                new[idx[(j, l)]] = x
            rows.append(new)
            rdegs.append(rd + el)
    for j, ej in enumerate(M.generator_degrees):
        for row, rd in zip(N.relation_matrix, N.relation_degrees):
            new = [R.zero()] * len(pairs)
            for l, x in enumerate(row):
                h = R.degree_of(x)
                if h == "zero":
                    continue
                new[idx[(j, l)]] = x if koszul_sign(ej, h) == 1 else R.neg(x)
            rows.append(new)
            rdegs.append(ej + rd)
    return PresentedModule(R, degs, rows, rdegs)


def direct_sum(M: PresentedModule, N: PresentedModule) -> PresentedModule:
    R = M.algebra
    rows = [list(r) + [R.zero()] * N.ngens for r in M.relation_matrix]
    rows += [[R.zero()] * M.ngens + list(r) for r in N.relation_matrix]
    return PresentedModule(R, M.generator_degrees + N.generator_degrees, rows,
                           M.relation_degrees + N.relation_degrees)


def module_piece(M, d: int) -> GradedPiece:
    """Exact base-module structure of M in degree d."""
    p = M.piece(d)
    return GradedPiece(M.base, d, p.invariants(), ())


# Nakayama

@dataclass(frozen=True)
class MinimalGenerators:
    count: int
    degrees: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.count} generators in degrees {list(self.degrees)}"


def is_connected_over_field(R) -> bool:
    """Connected graded over a field: generators all of one nonzero sign (or none)."""
    if not isinstance(R, PresentedAlgebra) or not R.base.is_field:
        return False
    degs = R.free.degrees
    return all(d < 0 for d in degs) or all(d > 0 for d in degs)


def _constant_term(R: PresentedAlgebra, x: Element):
    return x.coefficient((0,) * R.free.ngens)


def minimal_generators(M: PresentedModule) -> MinimalGenerators:
    """Degrees of a basis of M tensor k; by Nakayama these lift to a minimal generating set."""
    R = M.algebra
    if not is_connected_over_field(R):
        raise UnsupportedClass("minimal_generators needs a connected graded algebra over a field")
    if R.piece(0).element_is_zero(R.one()):
        return MinimalGenerators(0, ())
    out = []
    for e in sorted(set(M.generator_degrees)):
        cols = [j for j, ej in enumerate(M.generator_degrees) if ej == e]
        rows = [[_constant_term(R, row[j]) for j in cols]
                for row, rd in zip(M.relation_matrix, M.relation_degrees) if rd == e]
        k = quotient_invariants(len(cols), rows, R.base).rank
        out.extend([e] * k)
    return MinimalGenerators(len(out), tuple(out))


def residue_module(R: PresentedAlgebra) -> PresentedModule:
    """k = R/(generators) as an R-module."""
    return PresentedModule.cyclic(R, R.gens())


# Tor_1

def _right_sign(R, r, deg_n: int):
    h = R.degree_of(r)
    return isinstance(h, int) and is_odd(h) and is_odd(deg_n)


def _block_map(M: PresentedModule, N, d: int):
    """The map F1 (x) N -> F0 (x) N in degree d, on spanning coordinates."""
    R = M.algebra
    base = M.base
    src_blocks = [N.piece(d - rd) for rd in M.relation_degrees]
    tgt_blocks = [N.piece(d - e) for e in M.generator_degrees]
    offs, n_tgt = [], 0
    for p in tgt_blocks:
        offs.append(n_tgt)
        n_tgt += len(p.coords)
    images = []
    for i, (row, sb) in enumerate(zip(M.relation_matrix, src_blocks)):
        dn = d - M.relation_degrees[i]
        for nelt in sb.spanning:
            v = [base.zero()] * n_tgt
            for k, r in enumerate(row):
                if R.degree_of(r) == "zero":
                    continue
                img = N.act(r, nelt)
                if _right_sign(R, r, dn):
                    img = N.neg(img)
                tb = tgt_blocks[k]
                for c, x in tb.vector(img).items():
                    pos = offs[k] + tb.index[c]
                    v[pos] = base.add(v[pos], x)
            images.append(v)
    tgt_rels = []
    for k, tb in enumerate(tgt_blocks):
        for col in tb.columns():
            w = [base.zero()] * n_tgt
            w[offs[k]:offs[k] + len(col)] = col
            tgt_rels.append(w)
    return src_blocks, images, tgt_rels, n_tgt


def _syzygies(M: PresentedModule, j: int) -> list[list]:
    """Syzygies of the relation rows in degree j, as ring-element tuples indexed by relation."""
    R = M.algebra
    base = M.base
    src = [R.piece(j - rd) for rd in M.relation_degrees]
    tgt = [R.piece(j - e) for e in M.generator_degrees]
    offs, n = [], 0
    for p in tgt:
        offs.append(n)
        n += len(p.coords)
    imgs, owners = [], []
    for i, (row, sp) in enumerate(zip(M.relation_matrix, src)):
        for b in sp.spanning:
            v = [base.zero()] * n
            for k, r in enumerate(row):
                if R.degree_of(r) == "zero":
                    continue
                vec = tgt[k].vector(R.mul(b, r))
                for c, x in vec.items():
                    pos = offs[k] + tgt[k].index[c]
                    v[pos] = base.add(v[pos], x)
            imgs.append(v)
            owners.append((i, b))
    rels = []
    for k, p in enumerate(tgt):
        for col in p.columns():
            w = [base.zero()] * n
            w[offs[k]:offs[k] + len(col)] = col
            rels.append(w)
    out = []
    for z in preimage(imgs, rels, n, base):
        zs = [R.zero() for _ in M.relation_degrees]
        for c, (i, b) in zip(z, owners):
            if c:
                zs[i] = R.add(zs[i], R.scale(c, b))
        out.append(zs)
    return out


def _syzygy_degrees(M: PresentedModule, N, d: int, window: int) -> list[int]:
    gens = N.generators()
    rng = support_range(M.algebra)
    if not M.relation_degrees:
        return []
    lo_r, hi_r = min(M.relation_degrees), max(M.relation_degrees)
    hi = hi_r + (rng[1] if rng[1] is not None else window)
    lo = lo_r + (rng[0] if rng[0] is not None else -window)
    if gens is not None:
        return sorted({d - e for _, e in gens if lo <= d - e <= hi})
    top, bottom = N.top_degree(), N.bottom_degree()
    if top is not None:
        lo = max(lo, d - top)
    if bottom is not None:
        hi = min(hi, d - bottom)
    return list(range(lo, hi + 1))


def tor1(M: PresentedModule, N, d: int, window: int = 12) -> ModuleInvariants:
    """Tor_1(M, N) in degree d, read off the presentation of M.

    When N does not expose generators the syzygy contributions are collected
    over a degree window; with generators the computation is exact.
    """
    if N.algebra is not M.algebra and N.algebra != M.algebra:
        raise AlgebraMismatch("modules over different rings")
    base = M.base
    src_blocks, images, tgt_rels, n_tgt = _block_map(M, N, d)
    n_src = len(images)
    if n_src == 0:
        return ModuleInvariants(0)
    offs, acc = [], 0
    for p in src_blocks:
        offs.append(acc)
        acc += len(p.coords)
    kernel = span_basis(preimage(images, tgt_rels, n_tgt, base), n_src, base)
    image = []
    for i, p in enumerate(src_blocks):
        for col in p.columns():
            w = [base.zero()] * n_src
            w[offs[i]:offs[i] + len(col)] = col
            image.append(w)
    gens = N.generators()
    R = M.algebra
    for j in _syzygy_degrees(M, N, d, window):
        syz = _syzygies(M, j)
        if not syz:
            continue
        if gens is not None:
            elts = [h for h, e in gens if d - e == j]
        else:
            elts = N.piece(d - j).spanning
        for z in syz:
            for h in elts:
                w = [base.zero()] * n_src
                for i, zi in enumerate(z):
                    if R.degree_of(zi) == "zero":
                        continue
                    img = N.act(zi, h)
                    if is_odd(M.relation_degrees[i]) and is_odd(d - j):
                        img = N.neg(img)
                    b = src_blocks[i]
                    for c, x in b.vector(img).items():
                        pos = offs[i] + b.index[c]
                        w[pos] = base.add(w[pos], x)
                if any(w):
                    image.append(w)
    return subquotient_invariants(n_src, kernel, image, base)


# flatness

def _torsion_witness(M, degrees) -> Optional[dict]:
    for d in degrees:
        inv = M.piece(d).invariants()
        if inv.torsion:
            return {"degree": d, "torsion": list(inv.torsion)}
    return None


def _degree_range(M, bound: int) -> list[int]:
    lo, hi = -bound, bound
    top, bottom = M.top_degree(), M.bottom_degree()
    if top is not None:
        hi = min(hi, top)
    if bottom is not None:
        lo = max(lo, bottom)
    return sorted(range(lo, hi + 1), key=lambda d: (abs(d), d))


def flatness_status(M, bound: int = DEFAULT_BOUND) -> Verdict:
    """flat, not_flat (with witness) or undecided, for modules and restricted rings."""
    if isinstance(M, RestrictedModule):
        from .calculus import flatness_of_map
        return flatness_of_map(M.phi, bound)
    R = M.algebra
    if not M.relation_matrix:
        return Verdict("flat", detail="free module")
    if is_connected_over_field(R):
        k = residue_module(R)
        for d in sorted(set(M.relation_degrees)):
            t = tor1(k, M, d)
            if not t.is_zero():
                return Verdict("not_flat", {"degree": d, "tor1": t.render(R.base)})
        return Verdict("flat", detail="Tor_1(k, M) vanishes at every relation degree")
    if R.base.kind == "Z":
        if isinstance(R, PresentedAlgebra) and not R.free.ngens:
            w = _torsion_witness(M, [0])
            if w:
                return Verdict("not_flat", w)
            return Verdict("flat", detail="torsion-free finitely generated abelian group")
        degrees = _degree_range(M, bound)
        if all(not R.piece(d).invariants().torsion for d in range(-bound, bound + 1)
               if _in_support(R, d)):
            w = _torsion_witness(M, degrees)
            if w:
                return Verdict("not_flat", w, bound)
    return Verdict("undecided", bound=bound)


def _in_support(R, d: int) -> bool:
    lo, hi = support_range(R)
    return (lo is None or d >= lo) and (hi is None or d <= hi)


# Lazard's equational criterion

@dataclass
class EquationalFactor:
    status: str
    bound: int
    middle: Optional[PresentedModule] = None
    b: Optional[ModuleMap] = None
    y: Optional[ModuleMap] = None

    @property
    def found(self) -> bool:
        return self.status == "factor"


def _free_map_entries(a: ModuleMap) -> list[list]:
    return [list(img) for img in a.images]


def equational_factor(a: ModuleMap, x: ModuleMap, bound: int = DEFAULT_BOUND) -> EquationalFactor:
    """Factor x through a free module F'' killed by a: x = y o b with b o a = 0."""
    F, Fp, M = x.source, a.source, x.target
    R = F.algebra
    base = R.base
    rows = _free_map_entries(a)
    for i, row in enumerate(rows):
        if not M.piece(Fp.generator_degrees[i]).element_is_zero(x.apply(row)):
            raise ValueError("x o a is not zero")
    e = F.generator_degrees
    if not e:
        return EquationalFactor("factor", 0, PresentedModule.free(R, []), None, None)
    tgt_pieces = [M.piece(ej) for ej in e]
    offs, n_tgt = [], 0
    for p in tgt_pieces:
        offs.append(n_tgt)
        n_tgt += len(p.coords)
    target = []
    for j, p in enumerate(tgt_pieces):
        target.extend(p.dense(p.vector(x.images[j])))
    rels = []
    for j, p in enumerate(tgt_pieces):
        for col in p.columns():
            w = [base.zero()] * n_tgt
            w[offs[j]:offs[j] + len(col)] = col
            rels.append(w)
    cols: list[list] = []
    owners: list[tuple] = []
    tried: set = set()
    for width in range(bound + 1):
        new = sorted({c for ej in e for c in (ej - width, ej + width)} - tried)
        for c in new:
            tried.add(c)
            for beta in _killed_columns(a, F, c):
                for u in M.piece(c).spanning:
                    w = [base.zero()] * n_tgt
                    for j, bj in enumerate(beta):
                        if R.degree_of(bj) == "zero":
                            continue
                        img = M.act(bj, u)
                        for cc, v in tgt_pieces[j].vector(img).items():
                            pos = offs[j] + tgt_pieces[j].index[cc]
                            w[pos] = base.add(w[pos], v)
                    if any(w):
                        cols.append(w)
                        owners.append((c, beta, u))
        if not new and width > 0:
            continue
        allc = cols + rels
        if not any(target):
            sol = [base.zero()] * len(allc)
        elif not allc:
            sol = None
        else:
            mat = [[allc[k][i] for k in range(len(allc))] for i in range(n_tgt)]
            sol = solve_linear(mat, target, base, cols=len(allc))
        if sol is not None:
            return _assemble_factor(a, x, sol[:len(cols)], owners, width)
    return EquationalFactor("none", bound)


def _killed_columns(a: ModuleMap, F: PresentedModule, c: int) -> list[list]:
    """Basis tuples beta in F_c-shifted coordinates with sum_j a_ij beta_j = 0 for all i."""
    R = F.algebra
    base = R.base
    e = F.generator_degrees
    ep = a.source.generator_degrees
    src = [R.piece(ej - c) for ej in e]
    if not any(p.coords for p in src):
        return []
    tgt = [R.piece(ei - c) for ei in ep]
    offs, n = [], 0
    for p in tgt:
        offs.append(n)
        n += len(p.coords)
    rows = _free_map_entries(a)
    imgs, owners = [], []
    for j, sp in enumerate(src):
        for b in sp.spanning:
            v = [base.zero()] * n
            for i, row in enumerate(rows):
                aij = row[j]
                if R.degree_of(aij) == "zero":
                    continue
                for cc, val in tgt[i].vector(R.mul(aij, b)).items():
                    pos = offs[i] + tgt[i].index[cc]
                    v[pos] = base.add(v[pos], val)
            imgs.append(v)
            owners.append((j, b))
    rels = []
    for i, p in enumerate(tgt):
        for col in p.columns():
            w = [base.zero()] * n
            w[offs[i]:offs[i] + len(col)] = col
            rels.append(w)
    kernel = span_basis(preimage(imgs, rels, n, base), len(imgs), base)
    out = []
    for z in kernel:
        beta = [R.zero() for _ in e]
        for coef, (j, b) in zip(z, owners):
            if coef:
                beta[j] = R.add(beta[j], R.scale(coef, b))
        if any(R.degree_of(bj) != "zero" for bj in beta):
            out.append(beta)
    return out


def _assemble_factor(a, x, sol, owners, width) -> EquationalFactor:
    F, M = x.source, x.target
    R = F.algebra
    groups: dict[int, tuple] = {}
    for coef, (c, beta, u) in zip(sol, owners):
        if not coef:
            continue
        key = id(beta)
        if key not in groups:
            groups[key] = (c, beta, M.zero())
        c0, b0, m0 = groups[key]
        groups[key] = (c0, b0, M.add(m0, M.scale(coef, u)))
    chosen = list(groups.values())
    mid = PresentedModule.free(R, [c for c, _, _ in chosen])
    b = ModuleMap(F, mid, [[beta[j] for _, beta, _ in chosen] for j in range(F.ngens)])
    y = ModuleMap(mid, M, [m for _, _, m in chosen])
    for row, ei in zip(_free_map_entries(a), a.source.generator_degrees):
        assert mid.piece(ei).element_is_zero(b.apply(row)), "b o a is not zero"
    for j, ej in enumerate(F.generator_degrees):
        diff = M.add(y.apply(b.images[j]), M.neg(x.images[j]))
        assert M.piece(ej).element_is_zero(diff), "y o b differs from x"
    return EquationalFactor("factor", width, mid, b, y)


# evenness

def _even_part_map(M, d: int, xs: list, window: int):
    """Blocks, images in M_d, relations of A (x)_{A^ev} M^ev in degree d."""
    R = M.algebra
    base = M.base
    blocks = []
    for x, h in xs:
        dd = d - h
        blocks.append(M.piece(dd) if not is_odd(dd) else None)
    offs, n = [], 0
    for b in blocks:
        offs.append(n)
        n += len(b.coords) if b is not None else 0
    Md = M.piece(d)
    images = []
    for (x, h), b in zip(xs, blocks):
        if b is None:
            continue
        for m in b.spanning:
            images.append(Md.dense(Md.vector(M.act(x, m))))
    rels = []
    for s, b in enumerate(blocks):
        if b is None:
            continue
        for col in b.columns():
            w = [base.zero()] * n
            w[offs[s]:offs[s] + len(col)] = col
            rels.append(w)
    hs = [h for _, h in xs]
    rng = support_range(R)
    hi = max(hs) + (rng[1] if rng[1] is not None else window)
    lo = min(hs) + (rng[0] if rng[0] is not None else -window)
    top, bottom = M.top_degree(), M.bottom_degree()
    if top is not None:
        lo = max(lo, d - top)
    if bottom is not None:
        hi = min(hi, d - bottom)
    for j in range(lo, hi + 1):
        if is_odd(d - j):
            continue
        syz = _even_syzygies(R, xs, j)
        if not syz:
            continue
        for m in M.piece(d - j).spanning:
            for z in syz:
                w = [base.zero()] * n
                for s, zs in enumerate(z):
                    if zs is None or R.degree_of(zs) == "zero":
                        continue
                    b = blocks[s]
                    for c, v in b.vector(M.act(zs, m)).items():
                        pos = offs[s] + b.index[c]
                        w[pos] = base.add(w[pos], v)
                if any(w):
                    rels.append(w)
    return n, images, rels, Md


def _even_syzygies(R, xs, j: int) -> list[list]:
    """Tuples (z_S) of even elements with sum z_S x_S = 0 in degree j."""
    base = R.base
    tgt = R.piece(j)
    imgs, owners = [], []
    for s, (x, h) in enumerate(xs):
        if is_odd(j - h):
            continue
        for b in R.piece(j - h).spanning:
            imgs.append(tgt.dense(tgt.vector(R.mul(b, x))))
            owners.append((s, b))
    if not imgs:
        return []
    out = []
    for z in preimage(imgs, tgt.columns(), len(tgt.coords), base):
        zs = [None] * len(xs)
        for coef, (s, b) in zip(z, owners):
            if coef:
                term = R.scale(coef, b)
                zs[s] = term if zs[s] is None else R.add(zs[s], term)
        out.append(zs)
    return out


def evenness_status(M, bound: int = DEFAULT_BOUND, window: int = 8) -> Verdict:
    """Compare A (x)_{A^ev} M^ev -> M degreewise for |d| <= bound."""
    R = M.algebra
    base = M.base
    xs = odd_module_generators(R)
    only_generated = None
    for d in _degree_range(M, bound):
        n, images, rels, Md = _even_part_map(M, d, xs, window)
        if not quotient_invariants(len(Md.coords), Md.columns() + images, base).is_zero():
            return Verdict("not_evenly_generated", {"degree": d}, bound)
        if only_generated is None and n:
            kernel = span_basis(preimage(images, Md.columns(), len(Md.coords), base), n, base)
            if not subquotient_invariants(n, kernel, rels, base).is_zero():
                only_generated = d
    if only_generated is not None:
        return Verdict("evenly_generated_only", {"degree": only_generated}, bound)
    return Verdict("evenly_presented", bound=bound)
