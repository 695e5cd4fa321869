"""Symbolic reachability over indexed predicates, property and inductiveness checks."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .abstraction import CubeSet, PredicateBank, SubstitutionSet, concretization_formula, cubes_satisfying
from .encoder import encode
from .errors import EmptySubstitutionSet
from .logic import Expr, and_, iff
from .logic.expr import BoolSym
from .model import SystemModel, compose_init, compose_next
from .sat import InternalBackend, all_sat_project

HOLDS = "HOLDS"
UNKNOWN = "UNKNOWN"

# Reasons a verdict can be UNKNOWN although the property may hold.
FAILURE_REASONS = (
    "the system violates the property",
    "the predicate set is too weak to capture why the property holds",
    "the substitution set misses instantiations the proof needs",
    "no finite set of instantiations suffices for this property",
)


@dataclass(frozen=True)
class IterationStat:
    iteration: int
    new_cubes: int
    solver_calls: int
    seconds: float
    size: int


@dataclass
class ReachResult:
    rho: CubeSet
    iterations: int
    converged: bool
    per_iteration: list[IterationStat] = field(default_factory=list)
    history: list[CubeSet] = field(default_factory=list)

    @property
    def seconds(self) -> float:
        return sum(s.seconds for s in self.per_iteration)


@dataclass(frozen=True)
class PropertyVerdict:
    status: str
    witnesses: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


@dataclass(frozen=True)
class InductiveResult:
    base_failures: tuple[str, ...]
    step_failures: tuple[str, ...]

    @property
    def inductive(self) -> bool:
        return not self.base_failures and not self.step_failures

    def describe(self) -> str:
        if self.inductive:
            return "inductive under Π"
        parts = []
        if self.base_failures:
            parts.append("base fails (" + ", ".join(self.base_failures) + ")")
        if self.step_failures:
            parts.append("step fails (" + ", ".join(self.step_failures) + ")")
        return "not inductive under Π: " + "; ".join(parts)


def _constraints(b: PredicateBank, compose, m: SystemModel) -> Expr:
    # ordinary predicates are tied to their definitions; axioms are asserted
    parts = []
    for p, d in b.defs.items():
        composed = compose(d, m)
        if p in b.axioms:
            parts.append(and_(BoolSym(p), composed))
        else:
            parts.append(iff(BoolSym(p), composed))
    return and_(*parts)


def init_constraint(m: SystemModel, b: PredicateBank) -> Expr:
    return _constraints(b, compose_init, m)


def next_constraint(m: SystemModel, b: PredicateBank) -> Expr:
    return _constraints(b, compose_next, m)


class Engine:
    """One model, bank and substitution set; the next-state constraint is built once."""

    def __init__(self, m: SystemModel, b: PredicateBank, subs: SubstitutionSet, backend=None,
                 compact: bool = True, bound_mode: str = "conservative"):
        if len(subs) == 0:
            raise EmptySubstitutionSet("reachability needs at least one substitution")
        self.m = m
        self.b = b
        self.subs = subs
        self.backend = backend or InternalBackend()
        self.compact = compact
        self.bound_mode = bound_mode
        self._next = None

    @property
    def names(self) -> list[str]:
        return self.b.names

    def initial(self, stats: dict | None = None) -> CubeSet:
        f = encode(init_constraint(self.m, self.b), self.names, self.bound_mode)
        return all_sat_project(f, self.names, self.backend, stats=stats)

    def step(self, rho: CubeSet, stats: dict | None = None) -> CubeSet:
        if self._next is None:
            self._next = next_constraint(self.m, self.b)
        if not rho.cubes:
            if stats is not None:
                stats["calls"] = stats.get("calls", 0)
            return rho
        conc = concretization_formula(rho, self.b, self.subs, compact=self.compact)
        f = encode(and_(conc, self._next), self.names, self.bound_mode)
        new = all_sat_project(f, self.names, self.backend, exclude=rho.cubes, stats=stats)
        return rho | new

    def reach(self, max_iters: int = 64, on_iteration: Callable[[IterationStat], None] | None = None) -> ReachResult:
        if max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        stats: dict = {}
        t0 = time.perf_counter()
        rho = self.initial(stats)
        per = [IterationStat(0, len(rho), stats["calls"], time.perf_counter() - t0, len(rho))]
        if on_iteration:
            on_iteration(per[-1])
        history = [rho]
        converged = False
        steps = 0
        while steps < max_iters:
            steps += 1
            stats = {}
            t0 = time.perf_counter()
            nxt = self.step(rho, stats)
            per.append(IterationStat(steps, len(nxt) - len(rho), stats["calls"], time.perf_counter() - t0, len(nxt)))
            if on_iteration:
                on_iteration(per[-1])
            if nxt == rho:
                converged = True
                break
            rho = nxt
            history.append(rho)
        return ReachResult(rho, steps, converged, per, history)

    def check_inductive(self, chi: Expr | CubeSet) -> InductiveResult:
        s = chi if isinstance(chi, CubeSet) else cubes_satisfying(chi, self.names)
        base = self.initial() - s
        after = self.step(s) - s
        return InductiveResult(tuple(base.to_strings()), tuple(after.to_strings()))


def initial_abstract(m: SystemModel, b: PredicateBank, backend=None) -> CubeSet:
    f = encode(init_constraint(m, b), b.names)
    return all_sat_project(f, b.names, backend)


def step(rho: CubeSet, m: SystemModel, b: PredicateBank, subs: SubstitutionSet, backend=None,
         compact: bool = True) -> CubeSet:
    return Engine(m, b, subs, backend, compact).step(rho)


def reach(m: SystemModel, b: PredicateBank, subs: SubstitutionSet, max_iters: int = 64, backend=None,
          compact: bool = True) -> ReachResult:
    return Engine(m, b, subs, backend, compact).reach(max_iters)


def check_property(rho: CubeSet, psi: Expr, cap: int = 10) -> PropertyVerdict:
    bad = rho - cubes_satisfying(psi, rho.names)
    if not bad:
        return PropertyVerdict(HOLDS)
    return PropertyVerdict(UNKNOWN, tuple(bad.to_strings()[:cap]))


def check_inductive(chi: Expr, m: SystemModel, b: PredicateBank, subs: SubstitutionSet,
                    backend=None) -> InductiveResult:
    return Engine(m, b, subs, backend).check_inductive(chi)
