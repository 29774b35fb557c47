"""Kähler differentials, Jacobians and the smooth/unramified/étale predicates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .exactlin import in_span
from .freealg import Element, FreeDiracAlgebra, apply_map, partial_derivative
from .gmod import (DEFAULT_BOUND, PresentedModule, RestrictedModule, UnsupportedClass, Verdict,
                   evenness_status, is_connected_over_field, residue_module, tor1)
from .presalg import PresentedAlgebra
from .rings import (AlgebraMap, DiracField, Localization, field_extension_map, identity_map,
                    localization_map, ring_of)

__all__ = [
    "AlgebraMap", "RelativePresentation", "KaehlerModule", "identity_map", "localization_map",
    "field_extension_map", "relative_presentation", "jacobian", "kaehler", "is_standard_smooth",
    "is_unramified", "etale_certificate", "is_even_map", "even_generators", "flatness_of_map",
    "multiplication_module", "multiplication_tor",
]


@dataclass
class RelativePresentation:
    """B = A[y_1..y_n]/(f_1..f_c) with each f_i known through its partial derivatives.

    ``rows[i][j]`` is the image in B of the signed partial of f_i along y_j.
    """

    target: object
    generator_names: list[str]
    generator_degrees: list[int]
    relation_degrees: list[int]
    rows: list[list]
    labels: list[str]

    @property
    def n(self) -> int:
        return len(self.generator_names)

    @property
    def c(self) -> int:
        return len(self.rows)


def _is_localization_map(phi: AlgebraMap) -> bool:
    T = phi.target
    if not isinstance(T, Localization) or T.alg is not phi.source:
        return False
    return all(T.equal(img, g) for img, g in zip(phi.images, T.gens()))


def relative_presentation(phi: AlgebraMap) -> RelativePresentation:
    """A presentation of the target over the source.

    Localizations A -> A_f use A[z]/(z g - 1); field extensions t -> c u^e
    use K[u]/(u^e - c^(-1) t); otherwise the target's own presentation is
    joined with the graph relations a - phi(a).
    """
    B = phi.target
    if _is_localization_map(phi):
        return RelativePresentation(B, [B.inv_name], [-B.delta], [0], [[B.element(B.g)]],
                                    [f"{B.inv_name}*({B.g}) - 1"])
    ext = getattr(phi, "extension_data", None)
    if ext is not None:
        _, e = ext
        u_name, u_deg = phi.target_datum.gen
        u = B.alg.free.gen(0)
        row = [B.element(partial_derivative(u ** e, 0))]
        return RelativePresentation(B, [u_name], [u_deg], [phi.source_datum.gen[1]], [row],
                                    [f"{u_name}^{e} - c^-1*t"])
    free, rels, evaluate = B.presentation()
    ys = range(free.ngens)
    rows, degs, labels = [], [], []
    for r in rels:
        rows.append([evaluate(partial_derivative(r, y)) for y in ys])
        degs.append(r.degree())
        labels.append(str(r))
    src_alg = phi.source.alg if isinstance(phi.source, Localization) else phi.source
    for name, d, img in zip(src_alg.free.names, src_alg.free.degrees, phi.images):
        L = B.lift(img)
        rows.append([B.neg(evaluate(partial_derivative(L, y))) for y in ys])
        degs.append(d)
        labels.append(f"{name} - ({L})")
    return RelativePresentation(B, list(free.names), list(free.degrees), degs, rows, labels)


def jacobian(pres: RelativePresentation) -> list[list]:
    return [list(r) for r in pres.rows]


class KaehlerModule(PresentedModule):
    """Omega_{B/A}: generators d y_j, one relation per defining equation."""

    def __init__(self, pres: RelativePresentation):
        super().__init__(pres.target, pres.generator_degrees, pres.rows, pres.relation_degrees)
        self.presentation = pres
        self.differential_names = [f"d{n}" for n in pres.generator_names]


def kaehler(phi_or_pres) -> KaehlerModule:
    pres = phi_or_pres if isinstance(phi_or_pres, RelativePresentation) else relative_presentation(phi_or_pres)
    return KaehlerModule(pres)


def _module_vanishes(M: PresentedModule) -> tuple[bool, Optional[int]]:
    """A module is zero iff each generator vanishes in its own degree."""
    for j, e in enumerate(M.generator_degrees):
        if not M.piece(e).element_is_zero(M.gen(j)):
            return False, e
    return True, None


def jacobian_cokernel(pres: RelativePresentation) -> PresentedModule:
    """Cokernel of B^n -> B^c given by the Jacobian."""
    B = pres.target
    rows = [[pres.rows[i][j] for i in range(pres.c)] for j in range(pres.n)]
    return PresentedModule(B, [-d for d in pres.relation_degrees], rows,
                           [-d for d in pres.generator_degrees])


def is_standard_smooth(pres) -> Verdict:
    if isinstance(pres, AlgebraMap):
        pres = relative_presentation(pres)
    if pres.c == 0:
        return Verdict("true", detail="no relations")
    ok, d = _module_vanishes(jacobian_cokernel(pres))
    if ok:
        return Verdict("true", detail="Jacobian surjective")
    return Verdict("false", {"degree": d}, detail="Jacobian cokernel nonzero")


def is_unramified(phi: AlgebraMap) -> Verdict:
    omega = kaehler(phi)
    ok, d = _module_vanishes(omega)
    if ok:
        return Verdict("true", detail="Omega vanishes")
    return Verdict("false", {"degree": d}, detail="Omega nonzero")


def field_extension_certificate(phi: AlgebraMap) -> Optional[str]:
    ext = getattr(phi, "extension_data", None)
    if ext is None:
        return None
    K, L = phi.source_datum, phi.target_datum
    if not (isinstance(K, DiracField) and isinstance(L, DiracField)):
        return None
    _, e = ext
    if K.ext_degree != 1 or L.ext_degree != 1:
        return None
    if not L.base.is_unit(L.base.coerce(e)):
        return None
    return f"field_extension(e={e})"


def etale_certificate(phi: AlgebraMap) -> Verdict:
    if _is_localization_map(phi):
        return Verdict("etale", {"via": "localization"})
    via = field_extension_certificate(phi)
    if via:
        return Verdict("etale", {"via": via})
    pres = relative_presentation(phi)
    if pres.c == pres.n and is_standard_smooth(pres).status == "true":
        return Verdict("etale", {"via": "standard_smooth"})
    unr = is_unramified(phi)
    if unr.status == "false":
        return Verdict("not_etale", unr.witness, detail="not unramified")
    return Verdict("undecided")


def is_even_map(phi: AlgebraMap, bound: int = DEFAULT_BOUND) -> Verdict:
    v = evenness_status(RestrictedModule(phi), bound)
    if v.status == "evenly_presented":
        return Verdict("even", bound=bound)
    return Verdict("not_even", v.witness, bound, detail=v.status)


def _source_is_field(phi: AlgebraMap) -> bool:
    A = phi.source_datum
    if isinstance(A, DiracField):
        return True
    R = phi.source
    return isinstance(R, PresentedAlgebra) and R.base.is_field and not R.free.ngens


def flatness_of_map(phi: AlgebraMap, bound: int = DEFAULT_BOUND) -> Verdict:
    """Flatness of the target as a module over the source."""
    if _is_localization_map(phi):
        return Verdict("flat", detail="localization")
    if _source_is_field(phi):
        return Verdict("flat", detail="module over a Dirac field")
    A = phi.source
    B = phi.target
    N = RestrictedModule(phi)
    if isinstance(A, PresentedAlgebra) and A.base.kind == "Z" and not A.free.ngens:
        for d in sorted(range(-bound, bound + 1), key=abs):
            if not _maybe_nonzero(B, d):
                continue
            inv = B.piece(d).invariants()
            if inv.torsion:
                return Verdict("not_flat", {"degree": d, "torsion": list(inv.torsion)}, bound)
        return Verdict("flat", bound=bound, detail="torsion-free pieces")
    if is_connected_over_field(A):
        k = residue_module(A)
        for d in sorted(range(-bound, bound + 1), key=abs):
            t = tor1(k, N, d)
            if not t.is_zero():
                return Verdict("not_flat", {"degree": d, "tor1": t.render(A.base)}, bound)
        return Verdict("flat", bound=bound, detail="Tor_1(k, B) vanishes")
    return Verdict("undecided", bound=bound)


def _maybe_nonzero(B, d: int) -> bool:
    s = B.support_sign()
    if s == -1:
        return d <= 0
    if s == 1:
        return d >= 0
    if s == 0:
        return d == 0
    return True


def even_generators(A: PresentedAlgebra, bound: int = DEFAULT_BOUND) -> list[Element]:
    """Generators of the even part through degree bound, lowest |degree| first."""
    A = ring_of(A)
    if not isinstance(A, PresentedAlgebra):
        raise UnsupportedClass("even_generators needs a presented algebra")
    A.require_finite()
    chosen: list[tuple[Element, int]] = []
    degrees = [d for d in range(-bound, bound + 1) if d % 2 == 0 and d != 0 and _maybe_nonzero(A, d)]
    for d in sorted(degrees, key=abs):
        p = A.piece(d)
        if not p.coords:
            continue
        span = [p.dense(p.vector(x)) for x in _products_of_degree(chosen, d)]
        for m in p.spanning:
            v = p.dense(p.vector(m))
            if p.contains(p.vector(m)) or in_span(v, span + p.columns(), A.base):
                continue
            chosen.append((m, d))
            span.append(v)
    return [x for x, _ in chosen]


def _products_of_degree(chosen: Sequence[tuple[Element, int]], d: int) -> list[Element]:
    out: list[Element] = []

    def rec(start, acc, deg):
        if deg == d and acc is not None:
            out.append(acc)
            return
        for i in range(start, len(chosen)):
            x, e = chosen[i]
            nd = deg + e
            if (d < 0 and nd < d) or (d > 0 and nd > d):
                continue
            rec(i, x if acc is None else acc * x, nd)

    rec(0, None, 0)
    return out


# the multiplication map B (x)_A B -> B

@dataclass
class MultiplicationData:
    enveloping: object
    mu: AlgebraMap
    diagonal: PresentedModule
    target: RestrictedModule


def _split(R):
    if isinstance(R, Localization):
        return R.alg, R.g
    return R, None


def _generator_index(P: PresentedAlgebra, num: Element) -> Optional[int]:
    """Index k when num is exactly the generator y_k."""
    if len(num.terms) != 1:
        return None
    (m, c), = num.terms.items()
    if c != 1 or sum(m) != 1:
        return None
    return m.index(1)


def multiplication_module(phi: AlgebraMap) -> MultiplicationData:
    """C = B (x)_A B, the C-module B = C/(y - y'), and B restricted along C -> B.

    A graph relation y_k - y_k' (the image of a source generator is itself
    a generator of B) is used to eliminate y_k' from the second copy.
    """
    B = phi.target
    P, g = _split(B)
    base = P.base
    names = list(P.free.names)
    degs = list(P.free.degrees)
    npb = len(names)
    fractions = []
    for img in phi.images:
        fractions.append((img.num, img.k) if isinstance(B, Localization) else (img, 0))
    eliminated = set()
    for num, k in fractions:
        idx = _generator_index(P, num)
        if k == 0 and idx is not None:
            eliminated.add(idx)
    kept = [i for i in range(npb) if i not in eliminated]
    taken = set(names)
    second = []
    for i in kept:
        m = names[i] + "_2"
        while m in taken:
            m += "_"
        taken.add(m)
        second.append(m)
    free = FreeDiracAlgebra(base, list(zip(names, degs)) + [(m, degs[i]) for m, i in zip(second, kept)])
    pos = {i: npb + t for t, i in enumerate(kept)}
    right_images = [free.gen(pos[i]) if i in pos else free.gen(i) for i in range(npb)]

    def left(p: Element) -> Element:
        return free.element({m + (0,) * len(kept): c for m, c in p.terms.items()})

    def right(p: Element) -> Element:
        return apply_map(right_images, p, target=free)

    rels = [left(r) for r in P.relations.generators]
    rels += [right(r) for r in P.relations.generators if kept]
    gl = left(g) if g is not None else None
    gr = right(g) if g is not None else None
    for num, k in fractions:
        rel = left(num) * gr ** k - right(num) * gl ** k if k else left(num) - right(num)
        if not rel.is_zero():
            rels.append(rel)
    D = PresentedAlgebra(free, rels)
    C = Localization(D, gl * gr) if g is not None else D
    ys = [B.gen(n) for n in names] if g is not None else list(P.gens())
    mu = AlgebraMap(C, B, ys + [ys[i] for i in kept])
    Cg = C.gens()
    diag = PresentedModule.cyclic(C, [C.add(Cg[i], C.neg(Cg[pos[i]])) for i in kept])
    N = RestrictedModule(mu, generators=[(B.one(), 0)])
    return MultiplicationData(C, mu, diag, N)


def multiplication_tor(phi: AlgebraMap, degrees: Sequence[int]) -> dict[int, object]:
    """Tor_1 over B (x)_A B of B with B, degree by degree."""
    data = multiplication_module(phi)
    return {d: tor1(data.diagonal, data.target, d) for d in degrees}
