"""Explicit-state reference semantics at a finite scope.

States are dictionaries over the state symbols; functions and predicates
are total tables over the scope's argument domain. Anything that needs a
value outside the scope raises ``OutOfScope`` rather than being clamped.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from .abstraction import CubeSet, PredicateBank, Scope, SubstitutionSet, alpha_explicit, cube_to_string
from .errors import OutOfScope, StateBudgetExceeded
from .logic import FuncValue, evaluate
from .model import SystemModel


@dataclass
class BoundedUniverse:
    """Every interpretation of the state symbols at the given scope."""

    model: SystemModel
    scope: Scope

    def __iter__(self) -> Iterator[dict]:
        return self.scope.interps(self.model.state_syms, self.model.sig.sorts)


def _materialise(name: str, value, sc: Scope, sort) -> object:
    if isinstance(value, FuncValue):
        table = value.restrict(sc.points(sort.arity))
        if sort.kind == "FUNC":
            allowed = sc.values(name)
            for v in table.table.values():
                if v not in allowed:
                    raise OutOfScope(f"{name} takes value {v} outside [{allowed.start}, {allowed.stop - 1}]")
        return table
    if sort.kind == "INT":
        allowed = sc.values(name)
        if value not in allowed:
            raise OutOfScope(f"{name} = {value} outside [{allowed.start}, {allowed.stop - 1}]")
    return value


def _state(exprs: Mapping, env: Mapping, m: SystemModel, sc: Scope) -> tuple:
    sorts = m.sig.state
    return tuple(_materialise(v, evaluate(exprs[v], env), sc, sorts[v]) for v in sorts)


def initial_states(m: SystemModel, sc: Scope) -> list[dict]:
    names = m.state_syms
    seen = set()
    out = []
    for ij in sc.interps(m.init_syms, m.sig.sorts):
        key = _state(m.init, ij, m, sc)
        if key not in seen:
            seen.add(key)
            out.append(dict(zip(names, key)))
    return out


def successors(s: Mapping, m: SystemModel, sc: Scope) -> list[dict]:
    names = m.state_syms
    seen = set()
    out = []
    for ii in sc.interps(m.input_syms, m.sig.sorts):
        env = dict(s)
        env.update(ii)
        key = _state(m.next, env, m, sc)
        if key not in seen:
            seen.add(key)
            out.append(dict(zip(names, key)))
    return out


def axioms_hold(s: Mapping, b: PredicateBank, sc: Scope) -> bool:
    """Every axiom of ``b`` is true at ``s`` for every index valuation in scope."""
    if not b.axioms:
        return True
    for vals in itertools.product(*(sc.values(x) for x in b.index_syms)):
        env = dict(s)
        env.update(zip(b.index_syms, vals))
        if not all(evaluate(b.defs[q], env) for q in b.axioms):
            return False
    return True


def concrete_reach_bounded(m: SystemModel, sc: Scope, max_states: int = 100_000,
                           max_depth: int | None = None,
                           admit: Callable[[dict], bool] | None = None) -> list[dict]:
    """Breadth-first reachable states, in discovery order.

    ``admit`` restricts the system to the states it accepts (used to impose
    axioms); rejected states are neither reported nor expanded.
    """
    names = m.state_syms
    found: list[dict] = []
    seen: set[tuple] = set()
    frontier: deque = deque()
    for s in initial_states(m, sc):
        if admit is not None and not admit(s):
            continue
        key = tuple(s[v] for v in names)
        seen.add(key)
        found.append(s)
        frontier.append((s, 0))
    if len(found) > max_states:
        raise StateBudgetExceeded(f"more than {max_states} initial states")
    while frontier:
        s, depth = frontier.popleft()
        if max_depth is not None and depth >= max_depth:
            continue
        for t in successors(s, m, sc):
            key = tuple(t[v] for v in names)
            if key in seen:
                continue
            seen.add(key)
            if admit is not None and not admit(t):
                continue
            found.append(t)
            if len(found) > max_states:
                raise StateBudgetExceeded(f"more than {max_states} reachable states at this scope")
            frontier.append((t, depth + 1))
    return found


@dataclass
class SoundnessReport:
    rho: CubeSet
    states: int
    observed: CubeSet
    violations: list[tuple[dict, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def soundness_check(m: SystemModel, b: PredicateBank, subs: SubstitutionSet, sc: Scope,
                    rho: CubeSet | None = None, max_states: int = 100_000, backend=None) -> SoundnessReport:
    """Check that every abstracted bounded-reachable state lands inside ``rho``.

    ``rho`` defaults to the fixpoint computed by the engine.
    """
    if rho is None:
        from .engine import Engine

        rho = Engine(m, b, subs, backend).reach().rho
    states = concrete_reach_bounded(m, sc, max_states, admit=lambda s: axioms_hold(s, b, sc))
    observed = CubeSet(b.names)
    violations = []
    for s in states:
        cubes = alpha_explicit(s, b, sc)
        observed = observed | cubes
        for c in sorted(cubes.cubes - rho.cubes):
            violations.append((s, cube_to_string(c, b.k)))
    return SoundnessReport(rho, len(states), observed, violations)
