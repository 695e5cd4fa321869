"""Indexed predicates, abstract state sets and quantifier instantiation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EmptySubstitutionSet, FreeSymbolOutOfScope, ScopeTooLarge, ValidationError
from .logic import (
    BOOL,
    FALSE,
    INT,
    TRUE,
    Expr,
    FuncValue,
    and_,
    evaluate,
    free_symbols,
    ite,
    not_,
    or_,
    render,
    substitute,
    typecheck,
)
from .logic.expr import APPLY_TYPES, BoolSym, IntSym, LambdaVar
from .model import SystemModel, compose_next


@dataclass
class PredicateBank:
    """Index symbols X, predicate definitions phi (one per name in P), axioms Q."""

    index_syms: list[str]
    defs: dict[str, Expr]
    axioms: list[str] = field(default_factory=list)

    @property
    def names(self) -> list[str]:
        return list(self.defs)

    @property
    def k(self) -> int:
        return len(self.defs)

    def axiom_mask(self) -> int:
        mask = 0
        for j, p in enumerate(self.defs):
            if p in self.axioms:
                mask |= 1 << j
        return mask

    def validate(self, m: SystemModel) -> list[str]:
        problems = []
        allowed = set(m.sig.state) | set(self.index_syms)
        sorts = dict(m.sig.sorts)
        for x in self.index_syms:
            sorts[x] = INT
        for q in self.axioms:
            if q not in self.defs:
                problems.append(f"axiom {q!r} is not a predicate")
        for p, e in self.defs.items():
            stray = sorted(free_symbols(e) - allowed)
            if stray:
                problems.append(f"predicate {p!r} mentions {', '.join(stray)} (only state and index symbols allowed)")
                continue
            try:
                s = typecheck(e, sorts)
            except Exception as exc:
                problems.append(f"predicate {p!r}: {exc}")
                continue
            if s != BOOL:
                problems.append(f"predicate {p!r} is not a formula (sort {s})")
        return problems

    def check(self, m: SystemModel) -> "PredicateBank":
        problems = self.validate(m)
        if problems:
            raise ValidationError("invalid predicate bank:\n  " + "\n  ".join(problems), problems)
        return self


class CubeSet:
    """A set of total truth assignments over an ordered predicate list.

    Cube ``c`` is an int whose bit ``j`` is the value of ``names[j]``; its
    text form lists the bits in predicate order (``"10"`` is p=T, q=F).
    """

    __slots__ = ("names", "cubes")

    def __init__(self, names: Sequence[str], cubes: Iterable[int] = ()):
        self.names = tuple(names)
        self.cubes = frozenset(cubes)
        limit = 1 << len(self.names)
        for c in self.cubes:
            if not 0 <= c < limit:
                raise ValueError(f"cube {c} out of range for {len(self.names)} predicates")

    @property
    def k(self) -> int:
        return len(self.names)

    @classmethod
    def full(cls, names: Sequence[str]) -> "CubeSet":
        return cls(names, range(1 << len(names)))

    @classmethod
    def from_strings(cls, names: Sequence[str], bits: Iterable[str]) -> "CubeSet":
        return cls(names, (cube_from_string(b) for b in bits))

    @classmethod
    def from_assignments(cls, names: Sequence[str], assignments: Iterable[Mapping[str, bool]]) -> "CubeSet":
        out = []
        for a in assignments:
            out.append(sum(1 << j for j, n in enumerate(names) if a[n]))
        return cls(names, out)

    def to_strings(self) -> list[str]:
        return [cube_to_string(c, self.k) for c in sorted(self.cubes, key=lambda c: cube_to_string(c, self.k), reverse=True)]

    def assignment(self, cube: int) -> dict[str, bool]:
        return {n: bool(cube >> j & 1) for j, n in enumerate(self.names)}

    def _same_space(self, other: "CubeSet"):
        if self.names != other.names:
            raise ValueError("cube sets over different predicate lists")

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.cubes))

    def __len__(self):
        return len(self.cubes)

    def __contains__(self, cube) -> bool:
        if isinstance(cube, str):
            cube = cube_from_string(cube)
        return cube in self.cubes

    def __or__(self, other: "CubeSet") -> "CubeSet":
        self._same_space(other)
        return CubeSet(self.names, self.cubes | other.cubes)

    def __and__(self, other: "CubeSet") -> "CubeSet":
        self._same_space(other)
        return CubeSet(self.names, self.cubes & other.cubes)

    def __sub__(self, other: "CubeSet") -> "CubeSet":
        self._same_space(other)
        return CubeSet(self.names, self.cubes - other.cubes)

    def __le__(self, other: "CubeSet") -> bool:
        self._same_space(other)
        return self.cubes <= other.cubes

    def __lt__(self, other: "CubeSet") -> bool:
        self._same_space(other)
        return self.cubes < other.cubes

    def __eq__(self, other):
        if not isinstance(other, CubeSet):
            return NotImplemented
        return self.names == other.names and self.cubes == other.cubes

    def __hash__(self):
        return hash((self.names, self.cubes))

    def __repr__(self):
        return f"CubeSet({list(self.names)}, {{{', '.join(self.to_strings())}}})"


def cube_to_string(cube: int, k: int) -> str:
    return "".join("1" if cube >> j & 1 else "0" for j in range(k))


def cube_from_string(bits: str) -> int:
    bits = bits.replace("T", "1").replace("F", "0")
    return sum(1 << j for j, b in enumerate(bits) if b == "1")


def cube_formula(cube: int, names: Sequence[str]) -> Expr:
    return and_(*(BoolSym(n) if cube >> j & 1 else not_(BoolSym(n)) for j, n in enumerate(names)))


def formula_of(rho: CubeSet) -> Expr:
    """Disjunction of cube conjunctions, one disjunct per cube."""
    return or_(*(cube_formula(c, rho.names) for c in sorted(rho.cubes)))


def decision_formula(rho: CubeSet) -> Expr:
    """An equivalent formula shaped as a reduced decision diagram over the predicates.

    Shared sub-diagrams become shared sub-DAGs, so its size is that of the
    diagram rather than of the cube list.
    """
    k = rho.k
    memo: dict[tuple[int, frozenset], Expr] = {}

    # ``tails`` holds the cubes restricted to predicates j.. (shifted down by j)
    def build(j: int, tails: frozenset) -> Expr:
        if not tails:
            return FALSE
        if len(tails) == 1 << (k - j):
            return TRUE
        key = (j, tails)
        hit = memo.get(key)
        if hit is not None:
            return hit
        hi = frozenset(t >> 1 for t in tails if t & 1)
        lo = frozenset(t >> 1 for t in tails if not t & 1)
        if hi == lo:
            out = build(j + 1, hi)
        else:
            out = ite(BoolSym(rho.names[j]), build(j + 1, hi), build(j + 1, lo))
        memo[key] = out
        return out

    return build(0, rho.cubes)


def cubes_satisfying(psi: Expr, names: Sequence[str]) -> CubeSet:
    """The cube set [[psi]] of a formula over the predicate symbols."""
    stray = free_symbols(psi) - set(names)
    if stray:
        raise FreeSymbolOutOfScope(f"formula mentions non-predicate symbols: {', '.join(sorted(stray))}")
    k = len(names)
    return CubeSet(names, (c for c in range(1 << k)
                           if evaluate(psi, {n: bool(c >> j & 1) for j, n in enumerate(names)})))


# ---------------------------------------------------------------------------
# substitution sets


class SubstitutionSet:
    """An ordered, duplicate-free set of substitutions total on the index symbols."""

    def __init__(self, index_syms: Sequence[str], elements: Iterable[Mapping[str, Expr]] = ()):
        self.index_syms = tuple(index_syms)
        self._elems: list[dict[str, Expr]] = []
        self._keys: set[tuple] = set()
        for e in elements:
            self.add(e)

    @classmethod
    def identity(cls, index_syms: Sequence[str]) -> "SubstitutionSet":
        return cls(index_syms, [{x: IntSym(x) for x in index_syms}])

    def add(self, sub: Mapping[str, Expr]):
        missing = [x for x in self.index_syms if x not in sub]
        if missing:
            raise ValueError(f"substitution not total on index symbols: missing {', '.join(missing)}")
        extra = [x for x in sub if x not in self.index_syms]
        if extra:
            raise ValueError(f"substitution maps non-index symbols: {', '.join(extra)}")
        key = tuple(sub[x] for x in self.index_syms)
        if key in self._keys:
            return
        self._keys.add(key)
        self._elems.append({x: sub[x] for x in self.index_syms})

    def __iter__(self):
        return iter(self._elems)

    def __len__(self):
        return len(self._elems)

    def __contains__(self, sub: Mapping[str, Expr]) -> bool:
        return tuple(sub.get(x) for x in self.index_syms) in self._keys

    def __le__(self, other: "SubstitutionSet") -> bool:
        return all(s in other for s in self)

    def render(self) -> list[str]:
        return ["; ".join(f"{x} := {render(s[x])}" for x in self.index_syms) for s in self._elems]

    def __repr__(self):
        return f"SubstitutionSet({self.render()})"


def application_arguments(e: Expr) -> list[Expr]:
    """Integer argument terms of uninterpreted applications in ``e`` (first-occurrence order)."""
    out: list[Expr] = []
    seen_terms: set[Expr] = set()
    visited: set[Expr] = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if n in visited:
            continue
        visited.add(n)
        if isinstance(n, APPLY_TYPES):
            for a in n.args:
                if a not in seen_terms and not _has_lambda_var(a):
                    seen_terms.add(a)
                    out.append(a)
        stack.extend(reversed(n.children))
    return out


def _has_lambda_var(e: Expr) -> bool:
    if isinstance(e, LambdaVar):
        return True
    return any(_has_lambda_var(c) for c in e.children)


def generate_instantiations(m: SystemModel, b: PredicateBank, cross_product: bool = False) -> SubstitutionSet:
    """Identity plus one substitution per application-argument subterm.

    Terms are collected from every predicate definition and its next-state
    composition. By default one index varies at a time (the others map to
    themselves); ``cross_product`` maps every index independently.
    """
    X = b.index_syms
    pool: list[Expr] = []
    seen: set[Expr] = set()
    for p, d in b.defs.items():
        for src in (d, compose_next(d, m)):
            for t in application_arguments(src):
                if t not in seen:
                    seen.add(t)
                    pool.append(t)
    ident = {x: IntSym(x) for x in X}
    out = SubstitutionSet(X, [ident])
    if cross_product:
        choices = [[IntSym(x)] + [t for t in pool if t is not IntSym(x)] for x in X]
        for combo in itertools.product(*choices):
            out.add(dict(zip(X, combo)))
        return out
    for x in X:
        for t in pool:
            out.add({**ident, x: t})
    return out


def instantiate_predicates(b: PredicateBank, pi: Mapping[str, Expr]) -> dict[str, Expr]:
    """phi_p[pi/X] for every predicate p."""
    return {p: substitute(d, pi, b.index_syms) for p, d in b.defs.items()}


def concretization_formula(rho: CubeSet, b: PredicateBank, subs: SubstitutionSet, compact: bool = False) -> Expr:
    """Conjunction over pi in Pi of (rho[phi/P])[pi/X].

    With ``compact`` the cube set is written as a decision diagram instead
    of a disjunction of cubes; the two are equivalent.
    """
    if len(subs) == 0:
        raise EmptySubstitutionSet("concretization needs at least one substitution")
    shape = decision_formula(rho) if compact else formula_of(rho)
    parts = []
    for pi in subs:
        parts.append(substitute(shape, instantiate_predicates(b, pi), b.names))
    return and_(*parts)


# ---------------------------------------------------------------------------
# explicit-scope abstraction and concretization


@dataclass
class Scope:
    """A finite integer range for index, input and initial symbols.

    ``ranges`` overrides the range of individual symbols. Function tables
    are built over ``domain`` (default ``[lo, hi]``) and take values in
    ``[lo, hi]`` unless the function has its own entry in ``ranges``.
    """

    lo: int
    hi: int
    ranges: dict[str, tuple[int, int]] = field(default_factory=dict)
    budget: int = 1_000_000
    domain: tuple[int, int] | None = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("scope needs lo <= hi")
        for name, (a, b) in self.ranges.items():
            if a > b:
                raise ValueError(f"empty range for {name}")

    def values(self, name: str | None = None) -> range:
        lo, hi = self.ranges.get(name, (self.lo, self.hi)) if name else (self.lo, self.hi)
        return range(lo, hi + 1)

    def points(self, arity: int) -> list[tuple[int, ...]]:
        lo, hi = self.domain or (self.lo, self.hi)
        return list(itertools.product(range(lo, hi + 1), repeat=arity))

    def interps(self, names: Sequence[str], sorts: Mapping) -> Iterator[dict]:
        """Every interpretation of ``names`` over the scope, in a fixed order."""
        domains = []
        total = 1
        for n in names:
            s = sorts[n]
            if s.kind == "BOOL":
                dom = [False, True]
            elif s.kind == "INT":
                dom = list(self.values(n))
            else:
                pts = self.points(s.arity)
                rng = [False, True] if s.kind == "PRED" else list(self.values(n))
                dom = [FuncValue(s.arity, dict(zip(pts, vals)))
                       for vals in itertools.product(rng, repeat=len(pts))]
            total *= len(dom)
            if total > self.budget:
                raise ScopeTooLarge(f"enumerating {', '.join(names)} exceeds budget {self.budget}")
            domains.append(dom)
        for combo in itertools.product(*domains):
            yield dict(zip(names, combo))


def alpha_explicit(s: Mapping, b: PredicateBank, sc: Scope) -> CubeSet:
    """Abstraction of one concrete state: its cubes over every index valuation in scope."""
    total = 1
    for x in b.index_syms:
        total *= len(sc.values(x))
    if total > sc.budget:
        raise ScopeTooLarge(f"{total} index valuations exceed budget {sc.budget}")
    mask = b.axiom_mask()
    names = b.names
    defs = [b.defs[p] for p in names]
    cubes = set()
    for vals in itertools.product(*(sc.values(x) for x in b.index_syms)):
        env = dict(s)
        env.update(zip(b.index_syms, vals))
        c = 0
        for j, d in enumerate(defs):
            if evaluate(d, env):
                c |= 1 << j
        if c & mask == mask:
            cubes.add(c)
    return CubeSet(names, cubes)


def alpha_explicit_set(states: Iterable[Mapping], b: PredicateBank, sc: Scope) -> CubeSet:
    out = CubeSet(b.names)
    for s in states:
        out = out | alpha_explicit(s, b, sc)
    return out


def gamma_explicit(S: CubeSet, b: PredicateBank, universe: Iterable[Mapping], sc: Scope) -> list:
    """States of ``universe`` all of whose abstract images lie in ``S``."""
    return [s for s in universe if alpha_explicit(s, b, sc) <= S]
