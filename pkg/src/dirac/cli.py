"""Script language, session execution, report emission and the ``dirac`` command."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .exactlin import GF, QQ, ZZ
from .gmod import (DEFAULT_BOUND, PresentedModule, UnsupportedClass, evenness_status, flatness_status,
                   minimal_generators, tor1)
from .grading import spin_of
from .presalg import PresentedAlgebra
from .rings import AlgebraMap, DiracField, Localization, field_extension_map, inverse, ring_of

__all__ = ["ParseError", "Statement", "Script", "Report", "Session", "parse_script", "render_script",
           "execute", "emit", "degree_bound_from_env", "main"]

GRAMMAR = r"""
start: (stmt? _sep)* stmt?
_sep: ";" | _NL

?stmt: base | ring | ideal | alg | field | map | module | cover | command

base: "base" NAME
ring: "ring" NAME "=" "free" "(" [genspec ("," genspec)*] ")"
genspec: NAME ":" sint
ideal: "ideal" NAME "=" "(" [exprs] ")"
alg: "alg" NAME "=" NAME "/" NAME                -> alg_named
   | "alg" NAME "=" NAME "/" "(" exprs ")"        -> alg_inline
   | "alg" NAME "=" NAME "[" INT "/" expr "]"     -> alg_local
field: "field" NAME "=" "laurent" "(" genspec ")" -> field_laurent
     | "field" NAME "=" "constant"                -> field_constant
map: "map" NAME ":" NAME "->" NAME "=" "[" [assign ("," assign)*] "]" -> map_images
   | "map" NAME ":" NAME "->" NAME "=" "extension" "(" expr "," INT ")" -> map_extension
assign: NAME "->" expr
module: "module" NAME "=" NAME "(" [sint ("," sint)*] ")" ["/" "[" [row ("," row)*] "]"] -> module_free
      | "module" NAME "=" NAME "/" "(" exprs ")" ["at" sint]                             -> module_cyclic
row: "(" exprs ")"
cover: "cover" NAME "=" NAME "(" exprs ")"

command: "omega" NAME                  -> omega
       | "jacobian" NAME               -> jacobian
       | "check" NAME NAME             -> check
       | "spec" NAME [EVEN]            -> spec
       | "localize" NAME "at" expr     -> localize
       | "piece" NAME "at" sint        -> piece
       | "tor1" NAME NAME "at" sint    -> tor1
       | "minimalgens" NAME            -> minimalgens
       | "integral" NAME expr          -> integral
       | "descend" NAME NAME           -> descend
       | "amitsur" NAME                -> amitsur
       | "evenpart" NAME               -> evenpart

exprs: expr ("," expr)*
?expr: term
     | expr "+" term   -> add
     | expr "-" term   -> sub
?term: factor
     | term "*" factor -> mul
?factor: power
       | "-" factor    -> neg
?power: atom
      | atom "^" sint  -> pow
?atom: NAME            -> var
     | INT             -> num
     | "(" expr ")"
sint: SINT
SINT: /-?[0-9]+/

EVEN: "even"
NAME: /[A-Za-z_][A-Za-z0-9_']*/
INT: /[0-9]+/
_NL: /(\r?\n)+/
COMMENT: /#[^\n]*/
%ignore COMMENT
%ignore /[ \t\f]+/
"""

_PARSER = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, expected: set, message: str = ""):
        self.line = line
        self.column = column
        self.expected = set(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(message or f"parse error at line {line}, column {column}; expected one of: {exp}")


# statements and expressions; expressions are nested tuples

@dataclass(frozen=True)
class Statement:
    kind: str
    args: tuple
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        return _render_statement(self)


@dataclass(frozen=True)
class Script:
    statements: tuple

    def render(self) -> str:
        return render_script(self)


@v_args(inline=True)
class _Build(Transformer):
    def sint(self, t):
        return int(t)

    def genspec(self, name, deg):
        return (str(name), deg)

    def exprs(self, *es):
        return tuple(es)

    def row(self, es):
        return es

    def assign(self, name, e):
        return (str(name), e)

    def var(self, t):
        return ("var", str(t))

    def num(self, t):
        return ("num", int(t))

    def add(self, a, b):
        return ("add", a, b)

    def sub(self, a, b):
        return ("sub", a, b)

    def mul(self, a, b):
        return ("mul", a, b)

    def neg(self, a):
        return ("neg", a)

    def pow(self, a, n):
        return ("pow", a, n)


def _names(*xs):
    return tuple(str(x) if x is not None and not isinstance(x, (tuple, int)) else x for x in xs)


def _to_statement(tree) -> Statement:
    kind = tree.data
    ch = list(tree.children)
    line = tree.meta.line if not tree.meta.empty else 0
    if kind == "ring":
        args = (str(ch[0]), tuple(c for c in ch[1:] if c is not None))
    elif kind == "ideal":
        args = (str(ch[0]), ch[1] or ())
    elif kind == "map_images":
        args = (str(ch[0]), str(ch[1]), str(ch[2]), tuple(c for c in ch[3:] if c is not None))
    elif kind == "module_free":
        degs, rows = [], []
        for c in ch[2:]:
            if isinstance(c, int):
                degs.append(c)
            elif isinstance(c, tuple):
                rows.append(c)
        args = (str(ch[0]), str(ch[1]), tuple(degs), tuple(rows))
    elif kind == "alg_local":
        if int(ch[2]) != 1:
            raise ParseError(line, 0, {"1"}, f"parse error at line {line}: expected 1 in [1/f]")
        args = (str(ch[0]), str(ch[1]), ch[3])
    elif kind == "spec":
        args = (str(ch[0]), ch[1] is not None)
    elif kind == "map_extension":
        args = (str(ch[0]), str(ch[1]), str(ch[2]), ch[3], int(ch[4]))
    else:
        args = _names(*ch)
    return Statement(kind, args, line)


def parse_script(text: str) -> Script:
    """Parse a script; raises ParseError with the position and the expected tokens."""
    try:
        tree = _PARSER.parse(text if text.endswith("\n") else text + "\n")
    except UnexpectedToken as e:
        raise ParseError(e.line, e.column, _pretty_expected(e.expected)) from None
    except UnexpectedCharacters as e:
        raise ParseError(e.line, e.column, _pretty_expected(e.allowed or set())) from None
    except UnexpectedEOF as e:
        raise ParseError(-1, -1, _pretty_expected(e.expected)) from None
    except UnexpectedInput as e:  # pragma: no cover - other lark failures
        raise ParseError(getattr(e, "line", -1), getattr(e, "column", -1), set()) from None
    tree = _Build().transform(tree)
    return Script(tuple(_to_statement(t) for t in tree.children))


_FRIENDLY = {"NAME": "name", "SINT": "integer", "INT": "integer", "_NL": "newline"}


def _pretty_expected(names) -> set:
    out = set()
    for n in names:
        try:
            pat = _PARSER.get_terminal(n).pattern
            out.add(repr(pat.value) if pat.type == "str" else _FRIENDLY.get(n, n))
        except KeyError:
            out.add(n)
    return out


_PREC = {"add": 1, "sub": 1, "mul": 2, "neg": 3, "pow": 4, "var": 5, "num": 5}


def render_expr(e, p: int = 0) -> str:
    k = e[0]
    if k == "var":
        s = e[1]
    elif k == "num":
        s = str(e[1])
    elif k in ("add", "sub"):
        s = render_expr(e[1], 1) + (" + " if k == "add" else " - ") + render_expr(e[2], 2)
    elif k == "mul":
        s = render_expr(e[1], 2) + "*" + render_expr(e[2], 3)
    elif k == "neg":
        s = "-" + render_expr(e[1], 3)
    else:
        s = render_expr(e[1], 5) + "^" + str(e[2])
    return f"({s})" if _PREC[k] < p else s


def _exprs(es) -> str:
    return ", ".join(render_expr(e) for e in es)


def _render_statement(s: Statement) -> str:
    k, a = s.kind, s.args
    if k == "base":
        return f"base {a[0]}"
    if k == "ring":
        return f"ring {a[0]} = free(" + ", ".join(f"{n}:{d}" for n, d in a[1]) + ")"
    if k == "ideal":
        return f"ideal {a[0]} = ({_exprs(a[1])})"
    if k == "alg_named":
        return f"alg {a[0]} = {a[1]} / {a[2]}"
    if k == "alg_inline":
        return f"alg {a[0]} = {a[1]} / ({_exprs(a[2])})"
    if k == "alg_local":
        return f"alg {a[0]} = {a[1]}[1/{render_expr(a[2], 5)}]"
    if k == "field_laurent":
        return f"field {a[0]} = laurent({a[1][0]}:{a[1][1]})"
    if k == "field_constant":
        return f"field {a[0]} = constant"
    if k == "map_images":
        body = ", ".join(f"{n} -> {render_expr(e)}" for n, e in a[3])
        return f"map {a[0]} : {a[1]} -> {a[2]} = [{body}]"
    if k == "map_extension":
        return f"map {a[0]} : {a[1]} -> {a[2]} = extension({render_expr(a[3])}, {a[4]})"
    if k == "module_free":
        out = f"module {a[0]} = {a[1]}(" + ", ".join(map(str, a[2])) + ")"
        if a[3]:
            out += " / [" + ", ".join(f"({_exprs(r)})" for r in a[3]) + "]"
        return out
    if k == "module_cyclic":
        out = f"module {a[0]} = {a[1]} / ({_exprs(a[2])})"
        return out + (f" at {a[3]}" if a[3] is not None else "")
    if k == "cover":
        return f"cover {a[0]} = {a[1]}({_exprs(a[2])})"
    if k == "spec":
        return f"spec {a[0]}" + (" even" if a[1] else "")
    if k in ("localize",):
        return f"localize {a[0]} at {render_expr(a[1])}"
    if k == "piece":
        return f"piece {a[0]} at {a[1]}"
    if k == "tor1":
        return f"tor1 {a[0]} {a[1]} at {a[2]}"
    if k == "integral":
        return f"integral {a[0]} {render_expr(a[1])}"
    return " ".join([k] + [str(x) for x in a])


def render_script(script: Script) -> str:
    return "".join(s.render() + "\n" for s in script.statements)


# execution

@dataclass
class Report:
    command: str
    status: str  # exact | verified-to-bound | undecided | error
    result: object = None
    text: str = ""
    bound: Optional[int] = None

    def to_json(self) -> dict:
        out = {"command": self.command, "status": self.status, "result": self.result}
        if self.status == "verified-to-bound":
            out["bound"] = self.bound
        return out


class SessionError(ValueError):
    pass


def _base_ring(name: str):
    if name in ("Z", "ZZ", "ℤ"):
        return ZZ
    if name in ("Q", "QQ", "ℚ"):
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise SessionError(f"unknown base {name!r}; use Z, Q or F<p>")


@dataclass
class _Obj:
    kind: str  # ring | ideal | map | module | field | cover
    value: object


class Session:
    """Name environment plus the active base; statements run one at a time."""

    def __init__(self, bound: int = DEFAULT_BOUND):
        self.bound = bound
        self.base = QQ
        self.env: dict[str, _Obj] = {}

    def lookup(self, name: str, *kinds: str):
        if name not in self.env:
            raise SessionError(f"undefined name {name!r}")
        obj = self.env[name]
        if kinds and obj.kind not in kinds:
            raise SessionError(f"{name!r} is a {obj.kind}, expected {' or '.join(kinds)}")
        return obj.value

    def run(self, stmt: Statement) -> Optional[Report]:
        echo = stmt.render()
        handler = getattr(self, "_do_" + stmt.kind)
        try:
            out = handler(*stmt.args)
        except (SessionError, UnsupportedClass, ValueError, ArithmeticError, KeyError, AssertionError) as e:
            msg = str(e) if str(e) else type(e).__name__
            return Report(echo, "error", {"message": msg}, msg)
        if out is None:
            return None
        out.command = echo
        return out

    # evaluation

    def ring_value(self, name: str):
        v = self.lookup(name, "ring", "field")
        return v.ring if isinstance(v, DiracField) else v

    def eval(self, R, e):
        k = e[0]
        if k == "num":
            return R.scalar(e[1])
        if k == "var":
            return _gen(R, e[1])
        if k == "add":
            return R.add(self.eval(R, e[1]), self.eval(R, e[2]))
        if k == "sub":
            return R.add(self.eval(R, e[1]), R.neg(self.eval(R, e[2])))
        if k == "mul":
            return R.mul(self.eval(R, e[1]), self.eval(R, e[2]))
        if k == "neg":
            return R.neg(self.eval(R, e[1]))
        x = self.eval(R, e[1])
        n = e[2]
        if n < 0:
            y = inverse(R, x)
            if y is None:
                raise SessionError(f"{render_expr(e[1])} is not invertible")
            x, n = y, -n
        out = R.one()
        for _ in range(n):
            out = R.mul(out, x)
        return out

    # definitions

    def _define(self, name: str, kind: str, value):
        self.env[name] = _Obj(kind, value)

    def _do_base(self, name):
        self.base = _base_ring(name)

    def _do_ring(self, name, gens):
        self._define(name, "ring", PresentedAlgebra.free_on(self.base, list(gens)))

    def _do_ideal(self, name, exprs):
        self._define(name, "ideal", tuple(exprs))

    def _quotient(self, name, src, exprs):
        A = self.lookup(src, "ring")
        if not isinstance(A, PresentedAlgebra):
            raise UnsupportedClass("quotients are taken of presented algebras")
        rels = [A.lift(self.eval(A, e)) if hasattr(A, "lift") else self.eval(A, e) for e in exprs]
        self._define(name, "ring", A.quotient(rels))

    def _do_alg_named(self, name, src, ideal):
        self._quotient(name, src, self.lookup(ideal, "ideal"))

    def _do_alg_inline(self, name, src, exprs):
        self._quotient(name, src, exprs)

    def _do_alg_local(self, name, src, e):
        A = self.lookup(src, "ring")
        if not isinstance(A, PresentedAlgebra):
            raise UnsupportedClass("localizations are taken of presented algebras")
        self._define(name, "ring", Localization(A, A.lift(self.eval(A, e))))

    def _do_field_laurent(self, name, gen):
        self._define(name, "field", DiracField(self.base, gen))

    def _do_field_constant(self, name):
        self._define(name, "field", DiracField(self.base))

    def _do_map_images(self, name, src, tgt, assigns):
        A = self.ring_value(src)
        B = self.ring_value(tgt)
        images = {n: self.eval(B, e) for n, e in assigns}
        self._define(name, "map", AlgebraMap(A, B, images))

    def _do_map_extension(self, name, src, tgt, coeff, e):
        K = self.lookup(src, "field")
        L = self.lookup(tgt, "field")
        c = coeff[1] if coeff[0] == "num" else None
        if c is None:
            if coeff[0] == "neg" and coeff[1][0] == "num":
                c = -coeff[1][1]
            else:
                raise SessionError("extension coefficient must be an integer")
        self._define(name, "map", field_extension_map(K, L, c, e))

    def _do_module_free(self, name, ring, degs, rows):
        A = self.ring_value(ring)
        mat = [[self.eval(A, e) for e in r] for r in rows]
        for r in mat:
            if len(r) != len(degs):
                raise SessionError("relation rows must have one entry per generator")
        rel_degs = []
        for r in mat:
            d = None
            for j, x in enumerate(r):
                h = A.degree_of(x)
                if isinstance(h, int):
                    d = h + degs[j]
                    break
            if d is None:
                raise SessionError("zero relation row")
            rel_degs.append(d)
        self._define(name, "module", PresentedModule(A, list(degs), mat, rel_degs))

    def _do_module_cyclic(self, name, ring, exprs, deg):
        A = self.ring_value(ring)
        self._define(name, "module", PresentedModule.cyclic(A, [self.eval(A, e) for e in exprs], deg or 0))

    def _do_cover(self, name, ring, exprs):
        from .descent import ZariskiCover
        A = self.ring_value(ring)
        self._define(name, "cover", ZariskiCover(A, [self.eval(A, e) for e in exprs]))

    # commands

    def _verdict(self, v, text: Optional[str] = None) -> Report:
        status = "verified-to-bound" if v.bound is not None else "exact"
        if v.status == "undecided":
            status = "undecided"
        if text is None:
            text = v.status
            if v.witness:
                text += " (" + ", ".join(f"{k}={w}" for k, w in sorted(v.witness.items())) + ")"
        return Report("", status, v.to_json(), text, v.bound)

    def _do_omega(self, name):
        from .calculus import _module_vanishes, kaehler
        phi = self.lookup(name, "map")
        K = kaehler(phi)
        ok, d = _module_vanishes(K)
        pres = K.presentation
        gens = [f"d{n} (degree {e})" for n, e in zip(pres.generator_names, pres.generator_degrees)]
        text = "Omega = 0" if ok else f"Omega != 0 (survives in degree {d})"
        result = {"generators": gens, "relations": pres.c, "vanishes": ok, "witness_degree": d}
        return Report("", "exact", result, text + "; generators: " + (", ".join(gens) or "none"))

    def _do_jacobian(self, name):
        from .calculus import is_standard_smooth, jacobian, relative_presentation
        phi = self.lookup(name, "map")
        pres = relative_presentation(phi)
        J = jacobian(pres)
        B = pres.target
        rows = [[B.render(x) for x in r] for r in J]
        v = is_standard_smooth(pres)
        text = "[" + "; ".join(", ".join(r) for r in rows) + "]" + f"; standard smooth: {v.status}"
        return Report("", "exact", {"matrix": rows, "standard_smooth": v.status,
                                    "variables": list(pres.generator_names)}, text)

    def _do_check(self, what, name):
        from . import calculus
        if what == "etale":
            v = calculus.etale_certificate(self.lookup(name, "map"))
            if v.status == "etale":
                return Report("", "exact", v.to_json(), f"etale via {v.witness['via']} certificate")
            return self._verdict(v)
        if what == "unramified":
            return self._verdict(calculus.is_unramified(self.lookup(name, "map")))
        if what == "smooth":
            return self._verdict(calculus.is_standard_smooth(self.lookup(name, "map")))
        if what == "even":
            return self._verdict(calculus.is_even_map(self.lookup(name, "map"), self.bound))
        if what == "flat":
            obj = self.env.get(name)
            if obj is not None and obj.kind == "module":
                return self._verdict(flatness_status(obj.value, self.bound))
            return self._verdict(calculus.flatness_of_map(self.lookup(name, "map"), self.bound))
        if what == "evenness":
            return self._verdict(evenness_status(self.lookup(name, "module"), self.bound))
        if what == "quasifinite":
            from .spectra import GradedPrimeIdeal, quasi_finite_fiber
            phi = self.lookup(name, "map")
            A = phi.source
            if isinstance(A, PresentedAlgebra) and A.free.ngens:
                # fiber over the ideal of all generators
                prime = GradedPrimeIdeal(tuple(A.gens()), A)
                r = self._verdict(quasi_finite_fiber(phi, prime, bound=self.bound))
                r.text = f"fiber over {prime.render()}: {r.text}"
                return r
            return self._verdict(quasi_finite_fiber(phi, bound=self.bound))
        raise SessionError(f"unknown check {what!r}; use etale, unramified, smooth, even, flat, "
                           "evenness or quasifinite")

    def _do_spec(self, name, even):
        from .spectra import NotFinite, spec_finite, spec_special
        R = self.ring_value(name)
        try:
            X = spec_finite(R, even=even)
        except (NotFinite, UnsupportedClass):
            if even:
                raise
            X = spec_special(R)
        lines = [f"{i}: {p}" for i, p in enumerate(X.points)]
        spec = [f"{i} -> {j}" for i, j in X.specializations if i != j]
        text = f"{len(X.points)} points: " + ", ".join(lines)
        if spec:
            text += "; specializations: " + ", ".join(spec)
        return Report("", "exact", X.to_json(), text)

    def _do_localize(self, name, e):
        from .rings import PieceNotFinite
        from .spectra import classify_dirac_field
        A = self.lookup(name, "ring")
        if not isinstance(A, PresentedAlgebra):
            raise UnsupportedClass("localizations are taken of presented algebras")
        L = Localization(A, A.lift(self.eval(A, e)))
        c = classify_dirac_field(L)
        window = min(self.bound, 4)
        pieces = {}
        for d in range(-window, window + 1):
            try:
                pieces[str(d)] = L.piece(d).render()
            except PieceNotFinite:
                pieces[str(d)] = "not finite"
        cls = c.describe() if isinstance(c, DiracField) else "not a Dirac field"
        text = f"{cls}; " + ", ".join(f"{d}: {p}" for d, p in sorted(pieces.items(), key=lambda t: int(t[0])))
        return Report("", "verified-to-bound", {"class": cls, "pieces": pieces}, text, window)

    def _do_piece(self, name, d):
        obj = self.env.get(name)
        if obj is None:
            raise SessionError(f"undefined name {name!r}")
        if obj.kind == "module":
            P = obj.value.piece(d)
            base = obj.value.algebra.base
        else:
            R = self.ring_value(name)
            P = R.piece(d)
            base = R.base
        text = P.render()
        inv = P.invariants()
        result = {"degree": d, "spin": str(spin_of(d)), "rank": inv.rank, "torsion": list(inv.torsion),
                  "text": text}
        if base.is_field:
            result.pop("torsion")
        return Report("", "exact", result, text)

    def _do_tor1(self, m, n, d):
        M = self.lookup(m, "module")
        N = self.lookup(n, "module")
        inv = tor1(M, N, d)
        text = inv.render(M.algebra.base)
        return Report("", "exact", {"degree": d, "rank": inv.rank, "torsion": list(inv.torsion)}, text)

    def _do_minimalgens(self, name):
        M = self.lookup(name, "module")
        mg = minimal_generators(M)
        return Report("", "exact", {"count": mg.count, "degrees": list(mg.degrees)}, str(mg))

    def _do_integral(self, name, e):
        from .spectra import integral_certificate
        phi = self.lookup(name, "map")
        y = self.eval(phi.target, e)
        cert = integral_certificate(y, phi)
        if cert is None:
            return Report("", "undecided", None, "no monic relation found", 8)
        return Report("", "exact", {"relation": cert.render()}, cert.render())

    def _do_descend(self, cover, module):
        from .descent import DescentDatum, descend_module
        U = self.lookup(cover, "cover")
        M = self.lookup(module, "module")
        res = descend_module(DescentDatum.trivial(U, M), bound=self.bound, candidate=M)
        ok = res.module is not None
        text = ("descends to the given module" if ok else "candidate mismatch") + "; " + \
            ", ".join(f"{d}: {p}" for d, p in sorted(res.pieces.items()))
        return Report("", "verified-to-bound", res.to_json(), text, self.bound)

    def _do_amitsur(self, cover):
        from .descent import amitsur_check
        return self._verdict(amitsur_check(self.lookup(cover, "cover"), self.bound))

    def _do_evenpart(self, name):
        from .calculus import even_generators
        A = self.lookup(name, "ring")
        gens = even_generators(A, self.bound)
        rendered = [A.render(g) for g in gens]
        return Report("", "verified-to-bound", {"generators": rendered},
                      "even part generated by " + (", ".join(rendered) or "1"), self.bound)


def _gen(R, name: str):
    if isinstance(R, Localization):
        return R.gen(name)
    if isinstance(R, PresentedAlgebra):
        if name not in R.free.names:
            raise SessionError(f"no generator {name!r}")
        return R.gen(name)
    return R.gen(name)


def execute(script: Script, bound: int = DEFAULT_BOUND, session: Optional[Session] = None) -> list[Report]:
    s = session if session is not None else Session(bound)
    out = []
    for stmt in script.statements:
        r = s.run(stmt)
        if r is not None:
            out.append(r)
    return out


def emit(reports: list[Report], fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"reports": [r.to_json() for r in reports]}, sort_keys=True, indent=2) + "\n"
    lines = []
    for r in reports:
        if r.status == "error":
            lines.append(f"error: {r.command}: {r.text}".replace("\n", " "))
            continue
        tag = r.status if r.status != "verified-to-bound" else f"verified to degree {r.bound}"
        lines.append(f"{r.command} => {r.text} [{tag}]")
    return "".join(line + "\n" for line in lines)


def degree_bound_from_env(default: int = DEFAULT_BOUND) -> int:
    raw = os.environ.get("DIRAC_DEGREE_BOUND")
    if raw is None or raw == "":
        return default
    try:
        n = int(raw)
    except ValueError:
        raise SystemExit(f"DIRAC_DEGREE_BOUND must be a positive integer, got {raw!r}")
    if n <= 0:
        raise SystemExit(f"DIRAC_DEGREE_BOUND must be a positive integer, got {raw!r}")
    return n


def _positive(s: str) -> int:
    n = int(s)
    if n <= 0:
        raise argparse.ArgumentTypeError("degree bound must be positive")
    return n


def _run_text(text: str, bound: int, fmt: str, session: Optional[Session] = None) -> tuple[str, bool]:
    try:
        script = parse_script(text)
    except ParseError as e:
        rep = Report("parse", "error", {"message": str(e), "line": e.line, "column": e.column,
                                        "expected": sorted(e.expected)}, str(e))
        return emit([rep], fmt), False
    reports = execute(script, bound, session)
    return emit(reports, fmt), all(r.status != "error" for r in reports)


def main(argv: Optional[list[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="dirac", description="Graded-commutative algebra calculator")
    sub = ap.add_subparsers(dest="cmd", required=True)
    run = sub.add_parser("run", help="execute a script file")
    run.add_argument("file")
    run.add_argument("--degree-bound", type=_positive, default=None)
    run.add_argument("--emit", choices=["text", "json"], default="text")
    repl = sub.add_parser("repl", help="interactive session")
    repl.add_argument("--degree-bound", type=_positive, default=None)
    repl.add_argument("--emit", choices=["text", "json"], default="text")
    sub.add_parser("selftest", help="run the acceptance corpus")
    args = ap.parse_args(argv)

    if args.cmd == "selftest":
        from .acceptance import run_all
        results = run_all()
        for r in results:
            sys.stdout.write(r.line() + "\n")
        return 0 if all(r.passed for r in results) else 1

    bound = args.degree_bound or degree_bound_from_env()
    if args.cmd == "run":
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
        out, ok = _run_text(text, bound, args.emit)
        sys.stdout.write(out)
        return 0 if ok else 1

    session = Session(bound)
    while True:
        try:
            line = input("dirac> ")
        except EOFError:
            break
        if line.strip() in ("quit", "exit"):
            break
        out, _ = _run_text(line, bound, args.emit, session)
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
