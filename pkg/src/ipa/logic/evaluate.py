"""Evaluation of expressions under explicit interpretations."""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Union

from ..errors import OutOfScope, SortMismatch, UnboundSymbol
from .expr import (
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
    TrueLit,
)


class FuncValue:
    """A total function over integer tuples: an exception table plus a default.

    The default is a closed lambda expression evaluated in ``env``. With no
    default the value is a finite table and a lookup outside it raises
    ``OutOfScope`` (this is how explicit-state exploration detects a scope
    that is too tight).
    """

    __slots__ = ("arity", "table", "default", "env", "_hash")

    def __init__(self, arity: int, table: Mapping[tuple, object] | None = None,
                 default: Expr | None = None, env: Mapping[str, object] | None = None):
        self.arity = arity
        self.table = dict(table or {})
        self.default = default
        self.env = dict(env or {})
        self._hash = None

    @classmethod
    def tabulate(cls, arity: int, points: Iterable[tuple], fn: Callable) -> "FuncValue":
        return cls(arity, {p: fn(*p) for p in points})

    def __call__(self, *args):
        try:
            return self.table[args]
        except KeyError:
            pass
        if self.default is None:
            raise OutOfScope(f"function argument {args} outside its table")
        lam = self.default
        lenv = dict(zip(lam.params, args))
        return _eval(lam.body, self.env, lenv)

    def restrict(self, points: Iterable[tuple]) -> "FuncValue":
        """Sample onto ``points``, dropping the default (a pure table)."""
        return FuncValue(self.arity, {p: self(*p) for p in points})

    def _key(self):
        return (self.arity, frozenset(self.table.items()), self.default,
                frozenset(self.env.items()) if self.default is not None else None)

    def __eq__(self, other):
        if not isinstance(other, FuncValue):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.table.items()))
        tail = "" if self.default is None else f" else {self.default!r}"
        return f"FuncValue({{{items}}}{tail})"


Value = Union[bool, int, FuncValue]
Interp = Mapping[str, Value]


def evaluate(e: Expr, interp: Interp) -> Value:
    """Denotation of ``e``; lambdas become ``FuncValue`` closures over ``interp``."""
    return _eval(e, interp, {})


def _eval(e: Expr, I, L):
    t = type(e)
    fn = _DISPATCH.get(t)
    if fn is None:
        raise SortMismatch(f"cannot evaluate {t.__name__}")
    return fn(e, I, L)


def _symbol(e, I, L):
    try:
        return I[e.name]
    except KeyError:
        raise UnboundSymbol(f"no value for symbol {e.name!r}") from None


def _lvar(e, I, L):
    try:
        return L[e.name]
    except KeyError:
        raise UnboundSymbol(f"lambda variable {e.name!r} unbound") from None


def _and(e, I, L):
    for a in e.args:
        if not _eval(a, I, L):
            return False
    return True


def _or(e, I, L):
    for a in e.args:
        if _eval(a, I, L):
            return True
    return False


def _apply(e, I, L):
    args = tuple(_eval(a, I, L) for a in e.args)
    head = e.head
    if isinstance(head, (LambdaInt, LambdaBool)):
        return _eval(head.body, I, {**L, **dict(zip(head.params, args))})
    return _eval(head, I, L)(*args)


def _lambda(e, I, L):
    if L:
        # free lambda variables of an enclosing binder are frozen into the env
        env = dict(I)
        body = e.body
        from .transform import _replace

        body = _replace(body, {}, {k: IntConst(v) for k, v in L.items() if k not in e.params}, {})
        e = type(e)(e.params, body)
        return FuncValue(len(e.params), default=e, env=env)
    return FuncValue(len(e.params), default=e, env=I)


_DISPATCH = {
    TrueLit: lambda e, I, L: True,
    FalseLit: lambda e, I, L: False,
    BoolSym: _symbol,
    IntSym: _symbol,
    FuncSym: _symbol,
    PredSym: _symbol,
    LambdaVar: _lvar,
    IntConst: lambda e, I, L: e.value,
    Not: lambda e, I, L: not _eval(e.arg, I, L),
    And: _and,
    Or: _or,
    Iff: lambda e, I, L: bool(_eval(e.left, I, L)) == bool(_eval(e.right, I, L)),
    IntEq: lambda e, I, L: _eval(e.left, I, L) == _eval(e.right, I, L),
    IntLt: lambda e, I, L: _eval(e.left, I, L) < _eval(e.right, I, L),
    PlusConst: lambda e, I, L: _eval(e.arg, I, L) + e.offset,
    Ite: lambda e, I, L: _eval(e.then, I, L) if _eval(e.cond, I, L) else _eval(e.else_, I, L),
    FuncApply: _apply,
    PredApply: _apply,
    LambdaInt: _lambda,
    LambdaBool: _lambda,
}


def evaluate_all(named: Mapping[str, Expr], interp: Interp) -> dict[str, Value]:
    """Evaluate a named set of expressions (a substitution) under one interpretation."""
    return {name: evaluate(e, interp) for name, e in named.items()}
