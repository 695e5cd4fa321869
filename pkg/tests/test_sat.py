import itertools
import random
import sys

import pycosat
import pytest
from hypothesis import given, settings

from ipa.encoder import CnfBuilder, PropFormula, encode
from ipa.engine import init_constraint
from ipa.errors import ExternalSolverFailure
from ipa.logic import BOOL, parse_expr
from ipa.sat import (
    SAT,
    UNSAT,
    DimacsBackend,
    InternalBackend,
    Solver,
    all_sat_project,
    make_backend,
    parse_solver_output,
    satisfies,
    solve,
)
from ipa.sat.cdcl import _luby

from conftest import PYCOSAT_CMD
from randexpr import brute_cnf_projection, random_cnf, rngs


def formula(n, clauses, preserve=()):
    return PropFormula(n, [list(c) for c in clauses], {f"v{v}": v for v in range(1, n + 1)},
                       {f"v{v}": v for v in preserve})


def pigeonhole(holes):
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for a, b in itertools.combinations(range(pigeons), 2):
            clauses.append([-var(a, h), -var(b, h)])
    return pigeons * holes, clauses


def test_solve_small_examples():
    r = solve(formula(2, [[1, 2], [-1]]))
    assert r.status == SAT and r[2] is True and r[1] is False
    assert solve(formula(1, [[1], [-1]])).status == UNSAT


def test_initial_constraint_excludes_mixed_cube(running):
    f = encode(init_constraint(running.model, running.bank), ["p", "q"])
    p, q = f.preserved["p"], f.preserved["q"]
    g = PropFormula(f.num_vars, f.clauses + [[p], [-q]], f.var_map, f.preserved)
    assert solve(g).status == UNSAT


def test_empty_formula_and_empty_clause():
    assert solve(formula(0, [])).status == SAT
    cb = CnfBuilder()
    cb.add_clause([])
    assert cb.unsat


def test_luby_sequence():
    assert [_luby(i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


@pytest.mark.parametrize("holes", [3, 4, 5])
def test_pigeonhole_unsat(holes):
    n, clauses = pigeonhole(holes)
    assert Solver(n, clauses).solve() is False


def test_random_3sat_against_pycosat():
    rng = random.Random(2024)
    outcomes = set()
    for _ in range(60):
        n = rng.randint(20, 60)
        clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)]
                   for _ in range(int(n * 4.26))]
        s = Solver(n, clauses, seed=rng.randint(0, 9))
        ours = s.solve()
        assert ours == (pycosat.solve(clauses) != "UNSAT")
        outcomes.add(ours)
        if ours:
            assert satisfies(s.model(), clauses)
    assert outcomes == {True, False}


def test_incremental_clauses_after_solve():
    s = Solver(3, [[1, 2, 3]])
    seen = set()
    while s.solve():
        m = tuple(s.model()[1:])
        assert m not in seen
        seen.add(m)
        s.add_clause([-(v + 1) if m[v] else v + 1 for v in range(3)])
    assert len(seen) == 7


# projected enumeration

def test_all_sat_equivalence():
    f = encode(parse_expr("p <=> q", {"p": BOOL, "q": BOOL}), ["p", "q"])
    assert sorted(all_sat_project(f).to_strings()) == ["00", "11"]


def test_all_sat_tautology():
    f = encode(parse_expr("p | !p", {"p": BOOL, "q": BOOL}), ["p", "q"])
    assert len(all_sat_project(f, ["p", "q"])) == 4


def test_all_sat_unknown_name():
    with pytest.raises(KeyError):
        all_sat_project(formula(2, [[1, 2]], [1]), ["v2"])


@settings(max_examples=100, deadline=None)
@given(rngs())
def test_all_sat_matches_brute_force(rng):
    n = rng.randint(1, 12)
    k = rng.randint(0, min(6, n))
    clauses = random_cnf(rng, n, rng.randint(0, 3 * n), 3)
    pvars = rng.sample(range(1, n + 1), k)
    stats = {}
    got = all_sat_project(formula(n, clauses, pvars), [f"v{v}" for v in pvars], stats=stats)
    assert set(got.cubes) == brute_cnf_projection(n, clauses, pvars)
    assert stats["calls"] == len(got) + 1


def test_exclude_blocks_listed_cubes():
    f = formula(2, [], [1, 2])
    stats = {}
    got = all_sat_project(f, ["v1", "v2"], exclude=[0, 3], stats=stats)
    assert sorted(got.cubes) == [1, 2] and stats["calls"] == 3


# external DIMACS backend

def test_external_backend_agrees_with_internal():
    rng = random.Random(99)
    ext = DimacsBackend(PYCOSAT_CMD)
    internal = InternalBackend()
    outcomes = []
    for _ in range(200):
        n = rng.randint(5, 30)
        clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)]
                   for _ in range(int(n * rng.uniform(3.5, 5.5)))]
        f = formula(n, clauses)
        a, b = solve(f, internal), solve(f, ext)
        assert a.status == b.status
        outcomes.append(b.status)
        if b.sat:
            assert satisfies(b.model, clauses)
    assert outcomes.count(SAT) >= 40 and outcomes.count(UNSAT) >= 40


def test_external_all_sat_agrees():
    rng = random.Random(5)
    for _ in range(10):
        n = rng.randint(4, 9)
        clauses = random_cnf(rng, n, 2 * n, 3)
        pvars = rng.sample(range(1, n + 1), 3)
        names = [f"v{v}" for v in pvars]
        f = formula(n, clauses, pvars)
        assert all_sat_project(f, names, DimacsBackend(PYCOSAT_CMD)) == all_sat_project(f, names)


def test_make_backend():
    assert isinstance(make_backend("internal"), InternalBackend)
    assert isinstance(make_backend("dimacs:minisat -verb=0"), DimacsBackend)
    with pytest.raises(ValueError):
        make_backend("glucose")


def test_parse_solver_output():
    r = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3)
    assert r.status == SAT and r.model == (False, True, False, True)
    assert parse_solver_output("s UNSATISFIABLE\n", 3).status == UNSAT
    with pytest.raises(ExternalSolverFailure):
        parse_solver_output("garbage", 3, returncode=1)
    with pytest.raises(ExternalSolverFailure):
        parse_solver_output("s UNKNOWN\n", 3)


def test_external_solver_missing_binary():
    with pytest.raises(ExternalSolverFailure):
        solve(formula(1, [[1]]), DimacsBackend("/nonexistent/solver"))


def test_external_solver_wrong_model_is_rejected(tmp_path):
    liar = tmp_path / "liar.py"
    liar.write_text("print('s SATISFIABLE'); print('v -1 0')\n")
    with pytest.raises(ExternalSolverFailure):
        solve(formula(1, [[1]]), DimacsBackend(f"{sys.executable} {liar}"))
