import pytest

from ipa.abstraction import CubeSet, PredicateBank, Scope, alpha_explicit
from ipa.errors import OutOfScope, StateBudgetExceeded
from ipa.frontend import parse_model
from ipa.logic import FUNC, INT, FuncValue, parse_expr
from ipa.oracle import (
    BoundedUniverse,
    axioms_hold,
    concrete_reach_bounded,
    initial_states,
    soundness_check,
    successors,
)

from conftest import RUNNING_SCOPE


def table(mapping):
    return FuncValue(1, {(u,): v for u, v in mapping.items()})


def test_initial_state_of_running_example(running):
    (s,) = initial_states(running.model, RUNNING_SCOPE)
    assert s["F"] == table({u: u for u in range(-2, 4)})


def test_depth_one_successors(running):
    (s,) = initial_states(running.model, RUNNING_SCOPE)
    succ = successors(s, running.model, RUNNING_SCOPE)
    assert len(succ) == 5
    # input i = -1 copies F(0) = 0 into position -1
    want = table({-2: -2, -1: 0, 0: 0, 1: 1, 2: 2, 3: 3})
    assert any(t["F"] == want for t in succ)
    # every successor differs from identity at exactly one point (i) by +1
    for t in succ:
        diff = [u for u in range(-2, 4) if t["F"](u) != u]
        assert len(diff) == 1 and t["F"](diff[0]) == diff[0] + 1


def test_running_reach_keeps_nonnegative_prefix(running):
    states = concrete_reach_bounded(running.model, RUNNING_SCOPE)
    assert len(states) == 132
    for s in states:
        assert all(s["F"](u) >= 0 for u in range(0, 4))


def test_depth_zero_is_initial(running):
    assert concrete_reach_bounded(running.model, RUNNING_SCOPE, max_depth=0) == \
        initial_states(running.model, RUNNING_SCOPE)


def test_stuttering_system():
    mf = parse_model("VAR n : INT\nINITSYM k : INT\nINIT n := k\nNEXT n := n\n")
    sc = Scope(0, 3)
    assert concrete_reach_bounded(mf.model, sc) == initial_states(mf.model, sc)
    assert len(initial_states(mf.model, sc)) == 4


def test_scope_too_tight(running):
    with pytest.raises(OutOfScope):
        concrete_reach_bounded(running.model, Scope(-2, 3))


def test_state_budget(running):
    with pytest.raises(StateBudgetExceeded):
        concrete_reach_bounded(running.model, RUNNING_SCOPE, max_states=10)


def test_oracle_is_deterministic(running):
    a = concrete_reach_bounded(running.model, RUNNING_SCOPE)
    b = concrete_reach_bounded(running.model, RUNNING_SCOPE)
    assert a == b


def test_bounded_universe_exhaustive(running):
    states = list(BoundedUniverse(running.model, Scope(-1, 1)))
    assert len(states) == 27
    assert len({s["F"] for s in states}) == 27


# soundness cross-check

def test_soundness_running(running, running_subs, running_reach):
    rep = soundness_check(running.model, running.bank, running_subs, RUNNING_SCOPE, rho=running_reach.rho)
    assert rep.ok and rep.states == 132
    assert rep.observed == running_reach.rho


def test_soundness_detects_missing_cube(running, running_subs, running_reach):
    broken = running_reach.rho - CubeSet.from_strings(["p", "q"], ["10"])
    rep = soundness_check(running.model, running.bank, running_subs, RUNNING_SCOPE, rho=broken)
    assert not rep.ok
    state, cube = rep.violations[0]
    assert cube == "10"
    assert "10" in alpha_explicit(state, running.bank, RUNNING_SCOPE).to_strings()


def test_soundness_vacuous_when_nothing_is_admitted(running, running_subs):
    s = {"F": FUNC(1), "x": INT}
    b = PredicateBank(["x"], {"p": parse_expr("F(x) >= 0", s), "a": parse_expr("F(x) > 5", s)}, ["a"])
    rep = soundness_check(running.model, b, running_subs, RUNNING_SCOPE, rho=CubeSet(b.names))
    assert rep.states == 0 and rep.ok


def test_axioms_hold_filter(german):
    sc = Scope(0, 3, ranges={"i": (1, 1)}, domain=(1, 1))
    (s0, *_) = initial_states(german.model, Scope(0, 3, ranges={"client0": (1, 1), "granted0": (1, 1)},
                                                   domain=(1, 1)))
    assert axioms_hold({**s0, "empty_hsl": True}, german.bank, sc)
    bad = {**s0, "empty_hsl": True, "sharer_list": FuncValue(1, {(1,): True})}
    assert not axioms_hold(bad, german.bank, sc)


def test_soundness_german_single_client(german, german_subs, german_reach):
    names = ("i", "cid", "client0", "granted0")
    sc = Scope(0, 3, ranges={n: (1, 1) for n in names} | {"act": (1, 11)}, domain=(1, 1))
    rep = soundness_check(german.model, german.bank, german_subs, sc, rho=german_reach.rho)
    assert rep.ok and rep.states > 10
