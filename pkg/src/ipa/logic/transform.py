"""Free symbols, simultaneous substitution and beta reduction."""

from __future__ import annotations

from typing import Collection, Mapping

from ..errors import SortMismatch
from .expr import (
    APPLY_TYPES,
    LAMBDA_TYPES,
    SYMBOL_TYPES,
    BoolSym,
    Expr,
    FuncSym,
    IntSym,
    LambdaVar,
    PredSym,
)

Substitution = Mapping[str, Expr]

_KIND_OF_SYMBOL = {BoolSym: "B", IntSym: "I", FuncSym: "F", PredSym: "P"}


def free_symbols(e: Expr) -> frozenset[str]:
    """Names of the free (non lambda-bound) symbols of ``e``."""
    fv = e._fv
    if fv is not None:
        return fv
    if isinstance(e, SYMBOL_TYPES):
        fv = frozenset((e.name,))
    elif isinstance(e, LambdaVar):
        fv = frozenset()
    else:
        kids = e.children
        if not kids:
            fv = frozenset()
        elif len(kids) == 1:
            fv = free_symbols(kids[0])
        else:
            fv = frozenset().union(*(free_symbols(k) for k in kids))
    e._fv = fv
    return fv


def symbol_nodes(e: Expr) -> dict[str, Expr]:
    """Free symbol name -> its symbol node, in first-occurrence order."""
    out: dict[str, Expr] = {}
    seen: set[Expr] = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if isinstance(n, SYMBOL_TYPES):
            out.setdefault(n.name, n)
        else:
            stack.extend(reversed(n.children))
    return out


def substitute(e: Expr, sub: Substitution, targets: Collection[str] | None = None) -> Expr:
    """Replace every free occurrence of each target symbol simultaneously.

    ``targets`` defaults to the keys of ``sub``. Replacements are not
    themselves rewritten.
    """
    if targets is None:
        active = dict(sub)
    else:
        active = {name: sub[name] for name in targets if name in sub}
    for name, repl in active.items():
        if not isinstance(repl, Expr):
            raise TypeError(f"replacement for {name!r} is not an expression")
    if not active:
        return e
    return _replace(e, active, {}, {})


def _replace(e: Expr, syms: Mapping[str, Expr], lvars: Mapping[str, Expr], memo) -> Expr:
    hit = memo.get(e)
    if hit is not None:
        return hit
    if isinstance(e, SYMBOL_TYPES):
        repl = syms.get(e.name)
        if repl is None:
            out = e
        else:
            if repl.kind != _KIND_OF_SYMBOL[type(e)]:
                raise SortMismatch(f"cannot replace {e.name!r} ({type(e).__name__}) with {repl!r}")
            out = repl
    elif isinstance(e, LambdaVar):
        out = lvars.get(e.name, e)
    elif syms and not (free_symbols(e) & syms.keys()) and not lvars:
        out = e
    elif isinstance(e, LAMBDA_TYPES):
        shadowed = {k: v for k, v in lvars.items() if k not in e.params}
        body = _replace(e.body, syms, shadowed, {}) if len(shadowed) != len(lvars) else _replace(e.body, syms, lvars, memo)
        out = e if body is e.body else type(e)(e.params, body)
    else:
        kids = e.children
        new = [_replace(k, syms, lvars, memo) for k in kids]
        if all(a is b for a, b in zip(new, kids)):
            out = e
        else:
            out = e.rebuild(new)
    memo[e] = out
    return out


def beta_reduce(e: Expr) -> Expr:
    """Expand every application of a syntactic lambda.

    Terminates because lambda parameters are integer-typed, so no
    reduction can create a new lambda application.
    """
    return _beta(e, {})


def _beta(e: Expr, memo) -> Expr:
    hit = memo.get(e)
    if hit is not None:
        return hit
    kids = e.children
    if not kids:
        out = e
    else:
        new = [_beta(k, memo) for k in kids]
        out = e if all(a is b for a, b in zip(new, kids)) else e.rebuild(new)
        if isinstance(out, APPLY_TYPES) and isinstance(out.head, LAMBDA_TYPES):
            lam = out.head
            if len(lam.params) != len(out.args):
                raise SortMismatch(f"lambda of arity {len(lam.params)} applied to {len(out.args)} arguments")
            out = _replace(lam.body, {}, dict(zip(lam.params, out.args)), {})
    memo[e] = out
    return out
