"""Signatures and sort checking against the CLU grammar."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..errors import ArityMismatch, SortMismatch, UndeclaredSymbol
from .expr import (
    BOOL,
    INT,
    And,
    BoolSym,
    Expr,
    FalseLit,
    FuncApply,
    FuncSym,
    Iff,
    IntConst,
    IntEq,
    IntLt,
    IntSym,
    Ite,
    LambdaBool,
    LambdaInt,
    LambdaVar,
    Not,
    Or,
    PlusConst,
    PredApply,
    PredSym,
    Sort,
    TrueLit,
)

SYMBOL_CLASSES = ("state", "inputs", "inits", "indices", "preds")


@dataclass
class Signature:
    """Declared symbols, partitioned by class (V, I, J, X, P)."""

    state: dict[str, Sort] = field(default_factory=dict)
    inputs: dict[str, Sort] = field(default_factory=dict)
    inits: dict[str, Sort] = field(default_factory=dict)
    indices: dict[str, Sort] = field(default_factory=dict)
    preds: dict[str, Sort] = field(default_factory=dict)

    def declare(self, cls: str, name: str, sort: Sort):
        if cls not in SYMBOL_CLASSES:
            raise ValueError(f"unknown symbol class {cls!r}")
        owner = self.class_of(name)
        if owner is not None:
            raise ValueError(f"symbol {name!r} already declared as {owner}")
        getattr(self, cls)[name] = sort

    def class_of(self, name: str) -> str | None:
        for cls in SYMBOL_CLASSES:
            if name in getattr(self, cls):
                return cls
        return None

    @property
    def sorts(self) -> dict[str, Sort]:
        out: dict[str, Sort] = {}
        for cls in SYMBOL_CLASSES:
            out.update(getattr(self, cls))
        return out

    def __contains__(self, name: str) -> bool:
        return self.class_of(name) is not None

    def __getitem__(self, name: str) -> Sort:
        for cls in SYMBOL_CLASSES:
            table = getattr(self, cls)
            if name in table:
                return table[name]
        raise KeyError(name)


_SYMBOL_SORT_KIND = {BoolSym: "BOOL", IntSym: "INT", FuncSym: "FUNC", PredSym: "PRED"}


def typecheck(e: Expr, sig: Mapping[str, Sort] | Signature) -> Sort:
    """Return the sort of ``e``; raise on any violation of the grammar."""
    sorts = sig.sorts if isinstance(sig, Signature) else sig
    memo: dict[tuple[Expr, frozenset], Sort] = {}
    return _check(e, sorts, frozenset(), memo)


def _expect(e: Expr, want: Sort, got: Sort):
    if got != want:
        raise SortMismatch(f"expected {want}, found {got} in {e!r}")


def _check(e: Expr, sorts, bound: frozenset, memo) -> Sort:
    key = (e, bound)
    hit = memo.get(key)
    if hit is not None:
        return hit
    out = _check1(e, sorts, bound, memo)
    memo[key] = out
    return out


def _check1(e: Expr, sorts, bound, memo) -> Sort:
    t = type(e)
    if t in (TrueLit, FalseLit):
        return BOOL
    if t in _SYMBOL_SORT_KIND:
        if e.name not in sorts:
            raise UndeclaredSymbol(f"undeclared symbol {e.name!r}")
        declared = sorts[e.name]
        if declared.kind != _SYMBOL_SORT_KIND[t]:
            raise SortMismatch(f"symbol {e.name!r} declared {declared}, used as {_SYMBOL_SORT_KIND[t]}")
        return declared
    if t is LambdaVar:
        if e.name not in bound:
            raise UndeclaredSymbol(f"lambda variable {e.name!r} is not bound")
        return INT
    if t is IntConst:
        return INT
    if t is Not:
        _expect(e, BOOL, _check(e.arg, sorts, bound, memo))
        return BOOL
    if t in (And, Or):
        for a in e.args:
            _expect(e, BOOL, _check(a, sorts, bound, memo))
        return BOOL
    if t is Iff:
        _expect(e, BOOL, _check(e.left, sorts, bound, memo))
        _expect(e, BOOL, _check(e.right, sorts, bound, memo))
        return BOOL
    if t in (IntEq, IntLt):
        _expect(e, INT, _check(e.left, sorts, bound, memo))
        _expect(e, INT, _check(e.right, sorts, bound, memo))
        return BOOL
    if t is PlusConst:
        _expect(e, INT, _check(e.arg, sorts, bound, memo))
        if not isinstance(e.offset, int):
            raise SortMismatch("offset of + must be an integer constant")
        return INT
    if t is Ite:
        _expect(e, BOOL, _check(e.cond, sorts, bound, memo))
        a = _check(e.then, sorts, bound, memo)
        b = _check(e.else_, sorts, bound, memo)
        if a != b or a.is_function:
            raise SortMismatch(f"ITE branches must share a Boolean or integer sort: {a} vs {b}")
        return a
    if t in (FuncApply, PredApply):
        hs = _check(e.head, sorts, bound, memo)
        want = "FUNC" if t is FuncApply else "PRED"
        if hs.kind != want:
            raise SortMismatch(f"cannot apply {hs} as {want}")
        if hs.arity != len(e.args):
            raise ArityMismatch(f"{e.head!r} takes {hs.arity} arguments, given {len(e.args)}")
        for a in e.args:
            _expect(e, INT, _check(a, sorts, bound, memo))
        return BOOL if t is PredApply else INT
    if t in (LambdaInt, LambdaBool):
        if len(set(e.params)) != len(e.params) or not e.params:
            raise SortMismatch("lambda parameters must be distinct and non-empty")
        body = _check(e.body, sorts, bound | frozenset(e.params), memo)
        if t is LambdaInt:
            _expect(e, INT, body)
            return Sort("FUNC", len(e.params))
        _expect(e, BOOL, body)
        return Sort("PRED", len(e.params))
    raise SortMismatch(f"unknown node {t.__name__}")
