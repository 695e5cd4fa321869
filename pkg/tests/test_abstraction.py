import random

import pytest
from hypothesis import given, settings

from ipa.abstraction import (
    CubeSet,
    PredicateBank,
    Scope,
    SubstitutionSet,
    alpha_explicit,
    alpha_explicit_set,
    concretization_formula,
    cubes_satisfying,
    gamma_explicit,
    generate_instantiations,
)
from ipa.errors import EmptySubstitutionSet, ScopeTooLarge
from ipa.logic import BOOL, FUNC, INT, FuncValue, Signature, const, evaluate, parse_expr
from ipa.logic.expr import IntSym
from ipa.model import SystemModel

from randexpr import function_universe, random_bank, rngs

SC = Scope(-2, 2)


def running_bank():
    s = {"F": FUNC(1), "x": INT}
    return PredicateBank(["x"], {"p": parse_expr("F(x) >= 0", s), "q": parse_expr("x >= 0", s)})


def state(fn, lo=-8, hi=8):
    return {"F": FuncValue.tabulate(1, [(u,) for u in range(lo, hi + 1)], fn)}


def cs(*bits, names=("p", "q")):
    return CubeSet.from_strings(names, bits)


# cube sets

def test_cube_string_order():
    c = cs("10")
    assert c.assignment(next(iter(c))) == {"p": True, "q": False}
    assert CubeSet.full(["p", "q"]).to_strings() == ["11", "10", "01", "00"]


def test_cube_set_algebra():
    a, b = cs("11", "00"), cs("11", "10")
    assert (a | b) == cs("11", "10", "00")
    assert (a & b) == cs("11")
    assert (a - b) == cs("00")
    assert cs("11") <= a and cs("11") < a and not a < a


def test_cubes_satisfying():
    psi = parse_expr("q => p", {"p": BOOL, "q": BOOL})
    assert cubes_satisfying(psi, ["p", "q"]) == cs("11", "10", "00")


# instantiation generator

def test_instantiations_running_example(running):
    subs = generate_instantiations(running.model, running.bank)
    assert subs.render() == ["x := x", "x := i + 1"]


def test_instantiations_without_applications():
    sig = Signature()
    sig.declare("state", "n", INT)
    sig.declare("inputs", "k", INT)
    m = SystemModel(sig, {"n": const(0)}, {"n": IntSym("k")})
    b = PredicateBank(["x"], {"p": parse_expr("n < x", {"n": INT, "x": INT})})
    assert generate_instantiations(m, b).render() == ["x := x"]


def test_instantiations_german_include_current_client(german):
    subs = generate_instantiations(german.model, german.bank)
    assert {"i": IntSym("current_client")} in subs
    assert {"i": IntSym("i")} in subs


def test_instantiations_deterministic(german):
    a = generate_instantiations(german.model, german.bank)
    b = generate_instantiations(german.model, german.bank)
    assert a.render() == b.render()


def test_substitution_set_rejects_partial():
    with pytest.raises(ValueError):
        SubstitutionSet(["x", "y"], [{"x": IntSym("x")}])


def test_cross_product_superset(german):
    one = generate_instantiations(german.model, german.bank)
    both = generate_instantiations(german.model, german.bank, cross_product=True)
    assert one <= both


# explicit abstraction

def test_alpha_identity_function():
    assert alpha_explicit(state(lambda u: u), running_bank(), SC) == cs("11", "00")


def test_alpha_constant_function():
    assert alpha_explicit(state(lambda u: 1), running_bank(), SC) == cs("11", "10")


def test_alpha_without_index_symbols():
    b = PredicateBank([], {"p": parse_expr("F(0) >= 0", {"F": FUNC(1)})})
    assert len(alpha_explicit(state(lambda u: u), b, SC)) == 1


def test_alpha_scope_budget():
    with pytest.raises(ScopeTooLarge):
        alpha_explicit(state(lambda u: u), running_bank(), Scope(-2, 2, budget=3))


@pytest.fixture(scope="module")
def small_universe():
    # tables over the scope into [-2, 2]
    return function_universe(-2, 2)


def test_gamma_conjunction_is_empty(small_universe):
    assert gamma_explicit(cs("11"), running_bank(), small_universe, SC) == []


def test_gamma_p_is_nonnegative_functions(small_universe):
    got = gamma_explicit(cs("10", "11"), running_bank(), small_universe, SC)
    want = [s for s in small_universe if all(s["F"](u) >= 0 for u in range(-2, 3))]
    assert got == want and len(want) == 3 ** 5


def test_gamma_full_is_universe(small_universe):
    assert gamma_explicit(CubeSet.full(["p", "q"]), running_bank(), small_universe, SC) == small_universe


def test_gamma_union_strictness_witness(small_universe):
    b = running_bank()
    g = lambda S: {id(s) for s in gamma_explicit(S, b, small_universe, SC)}
    left = g(cs("10") | cs("11"))
    right = g(cs("10")) | g(cs("11"))
    assert right == set() and left > right


# concretization formula

def _same_meaning(a, b, names=("F", "x", "i")):
    rng = random.Random(3)
    for _ in range(200):
        env = {"x": rng.randint(-3, 3), "i": rng.randint(-3, 3),
               "F": FuncValue(1, {(u,): rng.randint(-2, 2) for u in range(-5, 6)})}
        if evaluate(a, env) != evaluate(b, env):
            return False
    return True


S2 = {"F": FUNC(1), "x": INT, "i": INT}


def test_concretization_running_example():
    b = running_bank()
    subs = SubstitutionSet(["x"], [{"x": IntSym("x")}, {"x": parse_expr("i + 1", S2)}])
    want = parse_expr("(F(x) >= 0 <=> x >= 0) & (F(i + 1) >= 0 <=> i + 1 >= 0)", S2)
    for compact in (False, True):
        assert _same_meaning(concretization_formula(cs("11", "00"), b, subs, compact), want)


def test_concretization_of_all_cubes_is_valid():
    b = running_bank()
    subs = SubstitutionSet.identity(["x"])
    e = concretization_formula(CubeSet.full(["p", "q"]), b, subs)
    assert _same_meaning(e, parse_expr("true", S2))


def test_concretization_single_cube():
    b = running_bank()
    got = concretization_formula(cs("10"), b, SubstitutionSet.identity(["x"]))
    assert got == parse_expr("F(x) >= 0 & !(x >= 0)", S2)


def test_concretization_needs_substitutions():
    with pytest.raises(EmptySubstitutionSet):
        concretization_formula(cs("10"), running_bank(), SubstitutionSet(["x"]))


# Galois connection at finite scope

GALOIS_SCOPE = Scope(-1, 1)
UNIVERSE = function_universe(-1, 1)


def galois_instance(rng):
    b = random_bank(rng, rng.randint(1, 3))
    states = [s for s in UNIVERSE if rng.random() < 0.3]
    abstract = CubeSet(b.names, [c for c in range(1 << b.k) if rng.random() < 0.5])
    return b, states, abstract


def _keys(states):
    return {id(s) for s in states}


@settings(max_examples=60, deadline=None)
@given(rngs())
def test_galois_adjunction(rng):
    b, S_C, S_A = galois_instance(rng)
    alpha = alpha_explicit_set(S_C, b, GALOIS_SCOPE)
    gamma = _keys(gamma_explicit(S_A, b, UNIVERSE, GALOIS_SCOPE))
    assert (alpha <= S_A) == (_keys(S_C) <= gamma)


@settings(max_examples=60, deadline=None)
@given(rngs())
def test_galois_closure_laws(rng):
    b, S_C, S_A = galois_instance(rng)
    sc = GALOIS_SCOPE
    assert _keys(S_C) <= _keys(gamma_explicit(alpha_explicit_set(S_C, b, sc), b, UNIVERSE, sc))
    assert alpha_explicit_set(gamma_explicit(S_A, b, UNIVERSE, sc), b, sc) <= S_A


@settings(max_examples=60, deadline=None)
@given(rngs())
def test_alpha_distributes_and_gamma_is_monotone(rng):
    b, S1, A1 = galois_instance(rng)
    _, S2_, A2 = galois_instance(random.Random(rng.random()))
    A2 = CubeSet(b.names, [c for c in A2.cubes if c < 1 << b.k])
    sc = GALOIS_SCOPE
    union = list({id(s): s for s in S1 + S2_}.values())
    assert alpha_explicit_set(union, b, sc) == alpha_explicit_set(S1, b, sc) | alpha_explicit_set(S2_, b, sc)
    g = lambda A: _keys(gamma_explicit(A, b, UNIVERSE, sc))
    assert g(A1 & A2) <= g(A1) <= g(A1 | A2)
    assert g(A1) | g(A2) <= g(A1 | A2)


def test_axioms_restrict_alpha():
    s = {"F": FUNC(1), "x": INT}
    b = PredicateBank(["x"], {"p": parse_expr("F(x) >= 0", s), "a": parse_expr("x >= 0", s)}, ["a"])
    cubes = alpha_explicit(state(lambda u: u), b, SC)
    assert cubes == CubeSet.from_strings(["p", "a"], ["11"])
