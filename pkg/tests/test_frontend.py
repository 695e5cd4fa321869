import json
import re
import subprocess
import sys

import pytest

from ipa.errors import ParseError, ValidationError
from ipa.frontend import load_model, parse_model, parse_substitutions, render_model
from ipa.frontend.cli import main

from conftest import MODELS, PYCOSAT_CMD

RUNNING_TEXT = """\
VAR F : FUNC(1)
INPUT i : INT
INIT F := LAMBDA (u). u
NEXT F := LAMBDA (u). ITE(u = i, F(i+1), F(u))
INDEX x
PRED p := F(x) >= 0
PRED q := x >= 0
PROPERTY safe := q => p
"""

CORPUS = sorted(MODELS.glob("*.ipa"))


def parse_error(text):
    with pytest.raises(ParseError) as err:
        parse_model(text)
    return err.value


# model files

def test_parse_running_example():
    mf = parse_model(RUNNING_TEXT)
    assert mf.bank.names == ["p", "q"] and mf.bank.index_syms == ["x"]
    assert list(mf.properties) == ["safe"]
    assert mf.model.input_syms == ["i"]


def test_property_with_undeclared_predicate():
    with pytest.raises(ValidationError) as err:
        parse_model(RUNNING_TEXT + "PROPERTY bad := p & r\n")
    assert any("UndeclaredPredicate" in d for d in err.value.diagnostics)


def test_german_has_thirteen_predicates(german):
    preds = [p for p in german.bank.names if p not in german.bank.axioms]
    assert len(preds) == 13
    assert german.bank.axioms == ["a1"]
    assert "last_granted" in german.model.state_syms


def test_missing_next_is_a_validation_error():
    with pytest.raises(ValidationError) as err:
        parse_model(RUNNING_TEXT.replace("NEXT F := LAMBDA (u). ITE(u = i, F(i+1), F(u))\n", ""))
    assert any(d.startswith("MissingNext") for d in err.value.diagnostics)


def test_error_positions():
    e = parse_error("VAR F : FUNC(1)\n\nNEXT F := LAMBDA (u). F(u) +\n")
    assert e.line == 3
    e = parse_error("VAR n : INT\nINIT n := 0\nNEXT n :=\n   n + m\n")
    assert (e.line, e.column) == (4, 8)
    e = parse_error("  VAR n : INT\n")
    assert (e.line, e.column) == (1, 3)


def test_declaration_errors():
    assert "already declared" in str(parse_error("VAR n : INT\nINPUT n : INT\n"))
    assert "reserved" in str(parse_error("VAR ITE : INT\n"))
    assert "unknown sort" in str(parse_error("VAR n : REAL\n"))
    assert "arity" in str(parse_error("VAR f : FUNC(0)\n"))
    assert "second NEXT" in str(parse_error("VAR n : INT\nINIT n := 0\nNEXT n := n\nNEXT n := n\n"))


def test_const_define_and_continuation():
    mf = parse_model("""\
CONST top := 3   # comment
VAR n : INT
INPUT go : BOOL
DEFINE step := go
    & n < top
INIT n := 0
NEXT n := ITE(step, n + 1, n)
INDEX x
PRED low := n < top
""")
    assert mf.consts == {"top": 3}
    assert "step" in mf.defines
    assert "go" in render_model(mf)


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_render_round_trip(path):
    mf = load_model(str(path))
    again = parse_model(render_model(mf))
    assert again.model.init == mf.model.init and again.model.next == mf.model.next
    assert again.bank.defs == mf.bank.defs and again.bank.axioms == mf.bank.axioms
    assert again.properties == mf.properties
    assert render_model(again) == render_model(mf)


def test_substitution_file(running):
    subs = parse_substitutions("# pool\nx := x\nx := i + 1\n\n", running)
    assert subs.render() == ["x := x", "x := i + 1"]
    with pytest.raises(ParseError):
        parse_substitutions("y := x\n", running)
    with pytest.raises(ParseError):
        parse_substitutions("x := x = i\n", running)
    with pytest.raises(ParseError):
        parse_substitutions("# nothing\n", running)


# command line

def run(capsys, *args):
    code = main(["verify", *map(str, args)])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_running_holds(capsys, tmp_path):
    dump = tmp_path / "reach.txt"
    code, out, _ = run(capsys, MODELS / "running.ipa", "--dump-reach", dump)
    assert code == 0
    assert "safe: HOLDS" in out
    assert "converged after 2 iterations, 3 cubes" in out
    assert "fixpoint: inductive under Π" in out
    assert dump.read_text() == "# p q\n11\n10\n00\n"


def test_cli_check_inductive(capsys):
    code, out, _ = run(capsys, MODELS / "running.ipa", "--check-inductive", "p & q",
                       "--check-inductive", "p | !q")
    assert code == 0
    assert "p & q: not inductive under Π: base fails (00)" in out
    assert "p | !q: inductive under Π" in out


def test_cli_german_holds(capsys):
    code, out, _ = run(capsys, MODELS / "german-cache.ipa", "-q")
    assert code == 0 and "coherence: HOLDS" in out


def test_cli_json_report(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, MODELS / "running.ipa", "--json", report, "--check-inductive", "p")
    data = json.loads(report.read_text())
    assert {"model", "predicates", "iterations", "converged", "reach_size", "properties", "timings"} <= set(data)
    assert data["predicates"] == ["p", "q"] and data["iterations"] == 2 and data["converged"] is True
    assert data["reach_size"] == 3
    assert data["properties"] == [{"name": "safe", "status": "HOLDS", "witnesses": []}]
    assert len(data["timings"]["per_iteration"]) == 3
    assert data["inductive"][0]["base_failures"] == ["00"]


def test_cli_unknown_explains(capsys, tmp_path):
    model = tmp_path / "weak.ipa"
    model.write_text(RUNNING_TEXT + "PROPERTY everywhere := p\n")
    code, out, _ = run(capsys, model)
    assert code == 1
    assert "everywhere: UNKNOWN (violating cubes: 00)" in out
    assert len(re.findall(r"^  [1-4]\) ", out, re.M)) == 4


def test_cli_budget_gives_unknown(capsys):
    code, out, _ = run(capsys, MODELS / "running.ipa", "--max-iters", "1")
    assert code == 1
    assert "NOT converged" in out and "safe: UNKNOWN" in out


def test_cli_identity_substitutions_are_too_weak(capsys, tmp_path):
    subs = tmp_path / "id.subs"
    subs.write_text("x := x\n")
    code, out, _ = run(capsys, MODELS / "running.ipa", "--subs", subs)
    assert code == 1 and "safe: UNKNOWN (violating cubes: 01)" in out


def test_cli_external_solver(capsys):
    code, out, _ = run(capsys, MODELS / "running.ipa", "--sat", f"dimacs:{PYCOSAT_CMD}")
    assert code == 0 and "safe: HOLDS" in out


def test_cli_oracle(capsys):
    code, out, _ = run(capsys, MODELS / "running.ipa", "--oracle-scope=-2..3", "--oracle-range", "i=-2..2")
    assert code == 0
    assert "oracle: 132 concrete states at scope -2..3, 0 cubes outside the reachable set" in out


def test_cli_oracle_scope_too_tight(capsys):
    code, out, _ = run(capsys, MODELS / "running.ipa", "--oracle-scope=-2..3")
    assert code == 0 and "oracle: skipped" in out


@pytest.mark.parametrize("args", [
    ["--max-iters", "0"],
    ["--oracle-scope", "3"],
    ["--oracle-scope", "0..3", "--oracle-range", "i"],
    ["--sat", "magic"],
    ["--check-inductive", "p & z"],
    ["--subs", "/nonexistent/subs"],
])
def test_cli_bad_options(capsys, args):
    code, _, err = run(capsys, MODELS / "running.ipa", *args)
    assert code == 2 and err.startswith("ipa: error:")


def test_cli_bad_model(capsys, tmp_path):
    bad = tmp_path / "bad.ipa"
    bad.write_text("VAR n : INT\nINIT n := (0\n")
    code, _, err = run(capsys, bad)
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, tmp_path / "missing.ipa")
    assert code == 2


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as ex:
        main(["verify"])
    assert ex.value.code == 2
    with pytest.raises(SystemExit) as ex:
        main(["verify", "m.ipa", "--max-iters", "lots"])
    assert ex.value.code == 2


def test_cli_deep_nesting_does_not_crash(capsys, tmp_path):
    deep = tmp_path / "deep.ipa"
    deep.write_text("VAR n : INT\nINIT n := " + "(" * 50000 + "0" + ")" * 50000 + "\nNEXT n := n\n")
    code, _, err = run(capsys, deep)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ipa", "verify", str(MODELS / "running.ipa"), "-q"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "safe: HOLDS" in proc.stdout
