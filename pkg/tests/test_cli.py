import json

import pytest

from dirac.cli import (ParseError, Script, Session, degree_bound_from_env, emit, execute, main, parse_script,
                       render_script)

SCRIPT = """\
# comments and blank lines are ignored
base Z
ring A = free(t:-1)
piece A at -2; piece A at -1
base F3
ring K = free(g:-2)
spec K
alg L = K[1/g]
map f : K -> L = [g -> g]
check etale f; check even f
ring B = free(x:-2, y:-2)
alg C = B / (x*y)
module M = C(0, -2) / [(x, 0), (0, y)]
minimalgens M
piece M at -2
module N = C / (x, y)
tor1 N N at -2
"""


def run(text, bound=32):
    return execute(parse_script(text), bound)


def test_parse_statement_kinds():
    s = parse_script(SCRIPT)
    kinds = [st.kind for st in s.statements]
    assert kinds[:5] == ["base", "ring", "piece", "piece", "base"]
    assert "module_cyclic" in kinds and "module_free" in kinds


def test_round_trip_print_parse():
    s = parse_script(SCRIPT)
    again = parse_script(render_script(s))
    assert again == s and isinstance(again, Script)


def test_expression_round_trip():
    text = "base Q\nring A = free(x:-2, y:-2)\nideal I = (x^2 - 3*x*y, -(x + y)^3, x - (y - x))\n"
    s = parse_script(text)
    assert parse_script(s.render()) == s


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_script("base Q\nring A = free(x:)\n")
    e = err.value
    assert (e.line, e.column) == (2, 17)
    assert "integer" in e.expected


def test_parse_error_unknown_keyword():
    with pytest.raises(ParseError) as err:
        parse_script("base Q\nfrobnicate A\n")
    assert err.value.line == 2 and err.value.column == 1


def test_reports_exact_values():
    reps = run(SCRIPT)
    got = [(r.command, r.status, r.text) for r in reps]
    assert got == [
        ("piece A at -2", "exact", "rank 0, torsion [2]"),
        ("piece A at -1", "exact", "rank 1, torsion []"),
        ("spec K", "exact", "2 points: 0: (0), 1: (1*g^1); specializations: 0 -> 1"),
        ("check etale f", "exact", "etale via localization certificate"),
        ("check even f", "verified-to-bound", "even"),
        ("minimalgens M", "exact", "2 generators in degrees [-2, 0]"),
        ("piece M at -2", "exact", "dim 2"),
        ("tor1 N N at -2", "exact", "dim 2"),
    ]


def test_spec_json_shape():
    rep = run("base F3\nring K = free(g:-2)\nspec K\n")[0]
    js = rep.to_json()["result"]
    assert [p["ideal"] for p in js["points"]] == ["(0)", "(1*g^1)"]
    assert js["specializations"] == [[0, 1]]


def test_json_round_trip_and_determinism():
    a = emit(run(SCRIPT), "json")
    b = emit(run(SCRIPT), "json")
    assert a == b
    js = json.loads(a)
    assert len(js["reports"]) == 8
    assert js["reports"][4]["bound"] == 32 and "bound" not in js["reports"][0]


def test_bound_is_reported():
    rep = [r for r in run(SCRIPT, bound=7) if r.status == "verified-to-bound"][0]
    assert rep.bound == 7
    assert emit([rep]).strip() == "check even f => even [verified to degree 7]"


def test_error_isolation():
    reps = run("base Q\nspec nothing\nring A = free(x:-2)\npiece A at -2\n")
    assert [r.status for r in reps] == ["error", "exact"]
    text = emit(reps)
    assert text.splitlines()[0] == "error: spec nothing: undefined name 'nothing'"
    assert len(text.splitlines()) == 2


def test_failed_definition_leaves_session_unchanged():
    s = Session(8)
    execute(parse_script("base Q\nring A = free(x:-2)\n"), session=s)
    reps = execute(parse_script("alg A = A / (zz)\npiece A at -2\n"), session=s)
    assert reps[0].status == "error" and reps[1].text == "dim 1"


def test_env_bound(monkeypatch):
    monkeypatch.setenv("DIRAC_DEGREE_BOUND", "9")
    assert degree_bound_from_env() == 9
    monkeypatch.setenv("DIRAC_DEGREE_BOUND", "-3")
    with pytest.raises(SystemExit):
        degree_bound_from_env()
    monkeypatch.delenv("DIRAC_DEGREE_BOUND")
    assert degree_bound_from_env(5) == 5


def test_main_run(tmp_path, capsys):
    p = tmp_path / "s.dirac"
    p.write_text(SCRIPT)
    assert main(["run", str(p), "--degree-bound", "4"]) == 0
    out = capsys.readouterr().out
    assert "check even f => even [verified to degree 4]" in out
    assert main(["run", str(p), "--emit", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["reports"][0]["status"] == "exact"


def test_main_reports_failure(tmp_path, capsys):
    p = tmp_path / "bad.dirac"
    p.write_text("base Q\nring A = free(x:\n")
    assert main(["run", str(p)]) == 1
    out = capsys.readouterr().out.strip()
    assert out.startswith("error: parse:") and "\n" not in out


def test_more_commands():
    reps = run("""\
base F3
ring A = free(x:-2, e:-1)
alg B = A / (x^2, x*e)
module N = A / (x) at 0
check evenness N
ring P = free(y:-4)
map g : P -> A = [y -> x^2]
integral g x
check quasifinite g
check unramified g
spec B
""")
    assert [r.text for r in reps] == [
        "evenly_presented",
        "X^2 + (2*x^2)",
        "fiber over (1*y^1): finite (dim=4)",
        "false (degree=-2)",
        "1 points: 0: (1*e^1, 1*x^1)",
    ]


def test_descent_commands():
    reps = run("base Z\nring Z0 = free()\ncover U = Z0(2, 3)\namitsur U\nmodule M = Z0(0)\ndescend U M\n", bound=4)
    assert [r.status for r in reps] == ["verified-to-bound"] * 2
    assert reps[0].text == "true"
    assert reps[1].text.startswith("descends to the given module")


def test_map_degree_checked():
    reps = run("base Q\nring A = free(x:-2)\nring P = free(y:-2)\nmap g : P -> A = [y -> x^2]\n")
    assert reps[0].status == "error" and "degree -4" in reps[0].text
