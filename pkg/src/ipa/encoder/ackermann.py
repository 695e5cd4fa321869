"""Elimination of uninterpreted applications by fresh variables plus consistency constraints."""

from __future__ import annotations

from ..logic.expr import (
    APPLY_TYPES,
    LAMBDA_TYPES,
    BoolSym,
    Expr,
    FuncApply,
    IntSym,
    and_,
    eq,
    iff,
    implies,
)


def ackermannize(e: Expr) -> tuple[Expr, dict[str, Expr]]:
    """Replace each distinct application ``F(t...)`` by a fresh symbol.

    Returns the rewritten formula, conjoined with ``t = t' => v = v'`` for
    every pair of applications of the same head, and a map from each fresh
    symbol name to the application it stands for (with arguments already
    rewritten). Fresh names contain ``!`` so they cannot clash with
    identifiers from the surface syntax.
    """
    apps: dict[tuple, Expr] = {}
    by_head: dict[str, list[tuple[tuple, Expr]]] = {}
    origin: dict[str, Expr] = {}
    memo: dict[Expr, Expr] = {}

    def walk(n: Expr) -> Expr:
        hit = memo.get(n)
        if hit is not None:
            return hit
        if isinstance(n, LAMBDA_TYPES):
            raise ValueError("ackermannize expects a beta-reduced formula")
        kids = n.children
        new = [walk(k) for k in kids]
        out = n if all(a is b for a, b in zip(new, kids)) else n.rebuild(new)
        if isinstance(out, APPLY_TYPES):
            head = out.head
            if isinstance(head, LAMBDA_TYPES):
                raise ValueError("ackermannize expects a beta-reduced formula")
            key = (head.name, out.args)
            v = apps.get(key)
            if v is None:
                group = by_head.setdefault(head.name, [])
                name = f"{head.name}!{len(group) + 1}"
                v = IntSym(name) if isinstance(out, FuncApply) else BoolSym(name)
                apps[key] = v
                group.append((out.args, v))
                origin[name] = out
            out = v
        memo[n] = out
        return out

    body = walk(e)
    constraints = []
    for group in by_head.values():
        for j in range(len(group)):
            args_j, v_j = group[j]
            for i in range(j):
                args_i, v_i = group[i]
                same_args = and_(*(eq(a, b) for a, b in zip(args_i, args_j)))
                same_val = eq(v_i, v_j) if isinstance(v_i, IntSym) else iff(v_i, v_j)
                constraints.append(implies(same_args, same_val))
    return and_(body, *constraints), origin
