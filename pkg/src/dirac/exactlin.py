"""Exact linear algebra over the integers, the rationals and prime fields.

Matrices are plain lists of rows holding canonical scalars: Python ints for
the integers and for F_p (reduced into [0, p)), ``Fraction`` for the
rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Matrix = list[list]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class BaseRing:
    """Coefficient ring: ``"Z"``, ``"Q"`` or ``"F"`` with a prime ``p``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise ValueError(f"unknown base ring kind {self.kind!r}")
        if self.kind == "F" and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.kind != "F" and self.p != 0:
            raise ValueError("only prime fields carry p")

    # scalar plumbing
    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "F" else 0

    def two_is_unit(self) -> bool:
        return self.kind == "Q" or (self.kind == "F" and self.p != 2)

    def coerce(self, c):
        if self.kind == "Z":
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"{c} is not an integer")
                return int(c.numerator)
            return int(c)
        if self.kind == "Q":
            return Fraction(c)
        if isinstance(c, Fraction):
            return (c.numerator * pow(c.denominator, -1, self.p)) % self.p
        return int(c) % self.p

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def add(self, a, b):
        s = a + b
        return s % self.p if self.kind == "F" else s

    def sub(self, a, b):
        s = a - b
        return s % self.p if self.kind == "F" else s

    def neg(self, a):
        return (-a) % self.p if self.kind == "F" else -a

    def mul(self, a, b):
        s = a * b
        return s % self.p if self.kind == "F" else s

    def is_unit(self, a) -> bool:
        if self.kind == "Z":
            return a in (1, -1)
        return a != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in {self}")
        if self.kind == "Z":
            return a
        if self.kind == "Q":
            return 1 / Fraction(a)
        return pow(a, -1, self.p)

    def divides(self, a, b) -> bool:
        """Whether a | b."""
        if self.kind == "Z":
            return b == 0 if a == 0 else b % a == 0
        return a != 0 or b == 0

    def render(self, c) -> str:
        if self.kind == "Q" and isinstance(c, Fraction) and c.denominator != 1:
            return f"{c.numerator}/{c.denominator}"
        if self.kind == "Q":
            return str(Fraction(c).numerator)
        return str(c)

    def __str__(self) -> str:
        return f"F{self.p}" if self.kind == "F" else self.kind


ZZ = BaseRing("Z")
QQ = BaseRing("Q")


def GF(p: int) -> BaseRing:
    return BaseRing("F", p)


@dataclass(frozen=True)
class ExactMatrix:
    base: BaseRing
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def from_rows(cls, base: BaseRing, rows: Sequence[Sequence], cols: Optional[int] = None):
        rows = [[base.coerce(c) for c in r] for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        assert all(len(r) == ncols for r in rows), "ragged matrix"
        return cls(base, len(rows), ncols, tuple(tuple(r) for r in rows))

    def to_rows(self) -> Matrix:
        return [list(r) for r in self.entries]


def _rows(m) -> Matrix:
    if isinstance(m, ExactMatrix):
        return m.to_rows()
    return [list(r) for r in m]


def identity(n: int, base: BaseRing = ZZ) -> Matrix:
    return [[base.one() if i == j else base.zero() for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, base: BaseRing) -> Matrix:
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        assert len(row) == inner
        r = []
        for j in range(ncols):
            s = base.zero()
            for k in range(inner):
                if row[k] and b[k][j]:
                    s = base.add(s, base.mul(row[k], b[k][j]))
            r.append(s)
        out.append(r)
    return out


def matvec(a: Matrix, x: Sequence, base: BaseRing) -> list:
    out = []
    for row in a:
        s = base.zero()
        for c, v in zip(row, x):
            if c and v:
                s = base.add(s, base.mul(c, v))
        out.append(s)
    return out


# fields

def rref(m, base: BaseRing) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over a field, returning (matrix, pivot columns)."""
    assert base.is_field
    a = _rows(m)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = base.inv(a[r][c])
        a[r] = [base.mul(inv, v) for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [base.sub(v, base.mul(f, w)) for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(m, base: BaseRing) -> int:
    a = _rows(m)
    if not a or not a[0]:
        return 0
    if base.is_field:
        return len(rref(a, base)[1])
    return len(_column_echelon(a, len(a[0]))[2])


def _solve_field(a: Matrix, b: list, base: BaseRing) -> Optional[list]:
    ncols = len(a[0]) if a else 0
    aug = [row + [v] for row, v in zip(a, b)]
    red, piv = rref(aug, base) if aug else ([], [])
    if ncols in piv:
        return None
    x = [base.zero()] * ncols
    for i, c in enumerate(piv):
        x[c] = red[i][ncols]
    return x


def _kernel_field(a: Matrix, ncols: int, base: BaseRing) -> list[list]:
    if not a:
        return [[base.one() if i == j else base.zero() for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(a, base)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [base.zero()] * ncols
        v[f] = base.one()
        for i, c in enumerate(piv):
            v[c] = base.neg(red[i][f])
        basis.append(v)
    return basis


# integers

def smith_form(m) -> tuple[list[int], Matrix, Matrix]:
    """Smith normal form over the integers.

    Returns ``(factors, U, V)`` with U, V unimodular and ``U*m*V`` diagonal,
    its nonzero diagonal being ``factors`` (positive, each dividing the next).
    """
    factors, U, V, _ = _smith(m)
    return factors, U, V


def _smith(m):
    a = [[int(c) for c in r] for r in _rows(m)]
    nr = len(a)
    nc = len(a[0]) if a else 0
    U = identity(nr)
    V = identity(nc)
    Vinv = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vinv[src] = [x - q * y for x, y in zip(Vinv[src], Vinv[dst])]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = None
            for i in range(t + 1, nr):
                if any(a[i][j] % a[t][t] for j in range(t + 1, nc)):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    factors = [a[i][i] for i in range(min(nr, nc)) if a[i][i]]
    return factors, U, V, Vinv


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _column_echelon(a: Matrix, ncols: int):
    """Unimodular column operations bringing a to lower column echelon form.

    Returns (columns, transform columns, pivots) where pivots lists
    (row, column) with column j < len(pivots) the pivot columns. Entries
    left of a pivot are reduced modulo it, which keeps growth in check.
    """
    nrows = len(a)
    cols = [[int(a[i][j]) for i in range(nrows)] for j in range(ncols)]
    tr = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    pivots = []
    p = 0
    for r in range(nrows):
        if p == ncols:
            break
        nz = [j for j in range(p, ncols) if cols[j][r]]
        if not nz:
            continue
        j0 = min(nz, key=lambda j: abs(cols[j][r]))
        cols[p], cols[j0] = cols[j0], cols[p]
        tr[p], tr[j0] = tr[j0], tr[p]
        for j in range(p + 1, ncols):
            b = cols[j][r]
            if not b:
                continue
            x = cols[p][r]
            if b % x == 0:
                q = b // x
                cols[j] = [u - q * v for u, v in zip(cols[j], cols[p])]
                tr[j] = [u - q * v for u, v in zip(tr[j], tr[p])]
                continue
            g, s, t = _egcd(x, b)
            xa, ba = x // g, b // g
            cp, cj = cols[p], cols[j]
            cols[p] = [s * u + t * v for u, v in zip(cp, cj)]
            cols[j] = [-ba * u + xa * v for u, v in zip(cp, cj)]
            tp, tj = tr[p], tr[j]
            tr[p] = [s * u + t * v for u, v in zip(tp, tj)]
            tr[j] = [-ba * u + xa * v for u, v in zip(tp, tj)]
        if cols[p][r] < 0:
            cols[p] = [-u for u in cols[p]]
            tr[p] = [-u for u in tr[p]]
        piv = cols[p][r]
        for j in range(p):
            q = cols[j][r] // piv
            if q:
                cols[j] = [u - q * v for u, v in zip(cols[j], cols[p])]
                tr[j] = [u - q * v for u, v in zip(tr[j], tr[p])]
        pivots.append((r, p))
        p += 1
    return cols, tr, pivots


def _solve_int(a: Matrix, b: list) -> Optional[list]:
    ncols = len(a[0]) if a else 0
    cols, tr, pivots = _column_echelon(a, ncols)
    res = [int(v) for v in b]
    y = [0] * ncols
    for r, j in pivots:
        v = res[r]
        if v % cols[j][r]:
            return None
        q = v // cols[j][r]
        if q:
            y[j] = q
            res = [u - q * w for u, w in zip(res, cols[j])]
    if any(res):
        return None
    x = [0] * ncols
    for j, q in enumerate(y):
        if q:
            x = [u + q * w for u, w in zip(x, tr[j])]
    return x


def _kernel_int(a: Matrix, ncols: int) -> list[list]:
    if not a:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    _, tr, pivots = _column_echelon(a, ncols)
    return [tr[j] for j in range(len(pivots), ncols)]


def _invariant_factors(rel: Matrix, n: int) -> list[int]:
    """Nonzero invariant factors of Z^n modulo the row span of rel."""
    import sympy
    from sympy.matrices.normalforms import invariant_factors

    # a lattice basis as columns, then a square triangular block by row operations
    cols, _, pivots = _column_echelon([[r[i] for r in rel] for i in range(n)], len(rel))
    basis = [cols[j] for _, j in pivots]
    if not basis:
        return []
    cols2, _, piv2 = _column_echelon(basis, n)
    p = len(basis)
    block = [[cols2[j][i] for j in range(p)] for i in range(p)]
    if all(block[i][j] == 0 for i in range(p) for j in range(p) if i != j):
        diag = [block[i][i] for i in range(p)]
        if all(diag[i + 1] % diag[i] == 0 for i in range(p - 1)):
            return diag
    out = invariant_factors(sympy.Matrix(block), domain=sympy.ZZ)
    return sorted(abs(int(f)) for f in out)


# public entry points

def solve_linear(m, rhs: Sequence, base: Optional[BaseRing] = None, cols: Optional[int] = None) -> Optional[list]:
    """A solution x of ``m * x = rhs`` over the base ring, or None."""
    if isinstance(m, ExactMatrix):
        base, cols = m.base, m.cols
    assert base is not None
    a = _rows(m)
    ncols = cols if cols is not None else (len(a[0]) if a else 0)
    b = [base.coerce(v) for v in rhs]
    assert len(b) == len(a), "rhs length must equal the number of rows"
    if ncols == 0:
        return [] if all(v == 0 for v in b) else None
    if base.is_field:
        return _solve_field(a, b, base)
    return _solve_int(a, b)


def kernel_basis(m, base: Optional[BaseRing] = None, cols: Optional[int] = None) -> list[list]:
    """Generators of {x : m*x = 0}; over the integers a lattice basis."""
    if isinstance(m, ExactMatrix):
        base, cols = m.base, m.cols
    assert base is not None
    a = _rows(m)
    ncols = cols if cols is not None else (len(a[0]) if a else 0)
    if base.is_field:
        return _kernel_field(a, ncols, base)
    return _kernel_int(a, ncols)


@dataclass(frozen=True)
class ModuleInvariants:
    """Isomorphism type of a finitely generated module over the base ring.

    Over a field only ``rank`` is meaningful; over the integers ``torsion``
    lists the nontrivial invariant factors.
    """

    rank: int
    torsion: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def render(self, base: BaseRing) -> str:
        if base.is_field:
            return f"dim {self.rank}"
        return f"rank {self.rank}, torsion [{', '.join(map(str, self.torsion))}]"


def quotient_invariants(n: int, relations: Sequence[Sequence], base: BaseRing) -> ModuleInvariants:
    """Invariants of base^n modulo the span of the given row vectors."""
    rel = [list(r) for r in relations if any(r)]
    if not rel:
        return ModuleInvariants(n)
    if base.is_field:
        return ModuleInvariants(n - rank(rel, base))
    factors = _invariant_factors(rel, n)
    return ModuleInvariants(n - len(factors), tuple(f for f in factors if f != 1))


def subquotient_invariants(n: int, kernel: Sequence[Sequence], image: Sequence[Sequence],
                           base: BaseRing) -> ModuleInvariants:
    """Invariants of K/I where K (a basis) and I ⊆ K are given as vectors in base^n."""
    k = [list(v) for v in kernel]
    if not k:
        return ModuleInvariants(0)
    kt = [[k[j][i] for j in range(len(k))] for i in range(n)]
    coords = []
    for v in image:
        if not any(v):
            continue
        c = solve_linear(kt, list(v), base, cols=len(k))
        assert c is not None, "image not contained in kernel"
        coords.append(c)
    return quotient_invariants(len(k), coords, base)


def span_basis(vectors: Sequence[Sequence], n: int, base: BaseRing) -> list[list]:
    """A basis of the base-submodule of base^n spanned by the vectors."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    if base.is_field:
        red, piv = rref(rows, base)
        return red[:len(piv)]
    cols, _, pivots = _column_echelon([[r[i] for r in rows] for i in range(n)], len(rows))
    return [cols[j] for _, j in pivots]


def preimage(images: Sequence[Sequence], rels: Sequence[Sequence], ntarget: int,
             base: BaseRing) -> list[list]:
    """Generators of {x : sum x_j*images[j] lies in span(rels)}.

    ``images`` and ``rels`` are vectors of length ``ntarget``; the result
    consists of coefficient vectors of length ``len(images)``.
    """
    k = len(images)
    if k == 0:
        return []
    cols = [list(v) for v in images] + [list(r) for r in rels if any(r)]
    if ntarget == 0:
        return [[base.one() if i == j else base.zero() for i in range(k)] for j in range(k)]
    m = [[cols[j][i] for j in range(len(cols))] for i in range(ntarget)]
    ker = kernel_basis(m, base, cols=len(cols))
    return [v[:k] for v in ker if any(v[:k])]


def in_span(v: Sequence, vectors: Sequence[Sequence], base: BaseRing) -> bool:
    """Whether v lies in the base-span of the given vectors."""
    if not any(v):
        return True
    vs = [list(w) for w in vectors if any(w)]
    if not vs:
        return False
    n = len(v)
    m = [[vs[j][i] for j in range(len(vs))] for i in range(n)]
    return solve_linear(m, list(v), base, cols=len(vs)) is not None
