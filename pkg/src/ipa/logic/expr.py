"""CLU expression trees.

Nodes are hash-consed: constructing a node that is structurally equal to a
live node returns the existing object, so structural equality is identity
and expressions behave as DAGs with shared subterms. Every memoized
traversal in the package relies on this.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Sort:
    kind: str  # BOOL | INT | FUNC | PRED
    arity: int = 0

    def __post_init__(self):
        if self.kind not in ("BOOL", "INT", "FUNC", "PRED"):
            raise ValueError(f"unknown sort kind {self.kind!r}")
        if self.kind in ("FUNC", "PRED") and self.arity < 1:
            raise ValueError(f"{self.kind} sort needs arity >= 1")
        if self.kind in ("BOOL", "INT") and self.arity != 0:
            raise ValueError(f"{self.kind} sort has no arity")

    @property
    def is_function(self) -> bool:
        return self.kind in ("FUNC", "PRED")

    def __str__(self):
        if self.is_function:
            return f"{self.kind}({self.arity})"
        return self.kind


BOOL = Sort("BOOL")
INT = Sort("INT")


def FUNC(n: int) -> Sort:
    return Sort("FUNC", n)


def PRED(n: int) -> Sort:
    return Sort("PRED", n)


_INTERN: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()


class Expr:
    """Base node. ``kind`` is 'B' (formula), 'I' (term), 'F' or 'P' (function/predicate expr)."""

    __slots__ = ("_args", "_hash", "_fv", "__weakref__")
    fields: tuple[str, ...] = ()
    kind = "?"

    def __new__(cls, *args):
        key = (cls, args)
        node = _INTERN.get(key)
        if node is None:
            node = object.__new__(cls)
            node._args = args
            node._hash = hash((cls.__name__, args))
            node._fv = None
            _INTERN[key] = node
        return node

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (self.__class__, self._args)

    def __init_subclass__(cls, **kw):
        super().__init_subclass__(**kw)
        for idx, name in enumerate(cls.__dict__.get("fields", ())):
            setattr(cls, name, property(lambda self, _i=idx: self._args[_i]))

    @property
    def children(self) -> tuple["Expr", ...]:
        return tuple(a for a in _flatten_args(self._args) if isinstance(a, Expr))

    def rebuild(self, children: Iterable["Expr"]) -> "Expr":
        """Same node type and scalar fields, new child expressions (in ``children`` order)."""
        it = iter(children)
        out = []
        for a in self._args:
            if isinstance(a, Expr):
                out.append(next(it))
            elif isinstance(a, tuple) and a and isinstance(a[0], Expr):
                out.append(tuple(next(it) for _ in a))
            else:
                out.append(a)
        return type(self)(*out)

    def __repr__(self):
        from .syntax import render

        try:
            return f"<{type(self).__name__} {render(self)}>"
        except Exception:  # rendering a malformed tree must not hide it
            return f"{type(self).__name__}{self._args!r}"


def _flatten_args(args):
    for a in args:
        if isinstance(a, tuple):
            yield from a
        else:
            yield a


class TrueLit(Expr):
    __slots__ = ()
    kind = "B"


class FalseLit(Expr):
    __slots__ = ()
    kind = "B"


class BoolSym(Expr):
    __slots__ = ()
    fields = ("name",)
    kind = "B"


class IntSym(Expr):
    __slots__ = ()
    fields = ("name",)
    kind = "I"


class FuncSym(Expr):
    __slots__ = ()
    fields = ("name",)
    kind = "F"


class PredSym(Expr):
    __slots__ = ()
    fields = ("name",)
    kind = "P"


class LambdaVar(Expr):
    __slots__ = ()
    fields = ("name",)
    kind = "I"


class IntConst(Expr):
    __slots__ = ()
    fields = ("value",)
    kind = "I"


class Not(Expr):
    __slots__ = ()
    fields = ("arg",)
    kind = "B"


class And(Expr):
    __slots__ = ()
    fields = ("args",)
    kind = "B"


class Or(Expr):
    __slots__ = ()
    fields = ("args",)
    kind = "B"


class Iff(Expr):
    __slots__ = ()
    fields = ("left", "right")
    kind = "B"


class IntEq(Expr):
    __slots__ = ()
    fields = ("left", "right")
    kind = "B"


class IntLt(Expr):
    __slots__ = ()
    fields = ("left", "right")
    kind = "B"


class PredApply(Expr):
    __slots__ = ()
    fields = ("head", "args")
    kind = "B"


class FuncApply(Expr):
    __slots__ = ()
    fields = ("head", "args")
    kind = "I"


class PlusConst(Expr):
    __slots__ = ()
    fields = ("arg", "offset")
    kind = "I"


class Ite(Expr):
    """If-then-else at term level, or at formula level when both branches are formulas."""

    __slots__ = ()
    fields = ("cond", "then", "else_")

    @property
    def kind(self):
        return self._args[1].kind


class LambdaInt(Expr):
    __slots__ = ()
    fields = ("params", "body")
    kind = "F"


class LambdaBool(Expr):
    __slots__ = ()
    fields = ("params", "body")
    kind = "P"


SYMBOL_TYPES = (BoolSym, IntSym, FuncSym, PredSym)
LAMBDA_TYPES = (LambdaInt, LambdaBool)
APPLY_TYPES = (FuncApply, PredApply)

TRUE = TrueLit()
FALSE = FalseLit()


def is_formula(e: Expr) -> bool:
    return e.kind == "B"


# ---------------------------------------------------------------------------
# constructors


def sym(name: str, sort: Sort) -> Expr:
    """The symbol node of the class matching ``sort``."""
    return {"BOOL": BoolSym, "INT": IntSym, "FUNC": FuncSym, "PRED": PredSym}[sort.kind](name)


def const(value: int) -> IntConst:
    return IntConst(int(value))


def not_(a: Expr) -> Expr:
    if a is TRUE:
        return FALSE
    if a is FALSE:
        return TRUE
    if isinstance(a, Not):
        return a.arg
    return Not(a)


def and_(*args: Expr) -> Expr:
    flat: list[Expr] = []
    seen = set()
    for a in args:
        parts = a.args if isinstance(a, And) else (a,)
        for p in parts:
            if p is FALSE:
                return FALSE
            if p is TRUE or p in seen:
                continue
            seen.add(p)
            flat.append(p)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def or_(*args: Expr) -> Expr:
    flat: list[Expr] = []
    seen = set()
    for a in args:
        parts = a.args if isinstance(a, Or) else (a,)
        for p in parts:
            if p is TRUE:
                return TRUE
            if p is FALSE or p in seen:
                continue
            seen.add(p)
            flat.append(p)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def implies(a: Expr, b: Expr) -> Expr:
    return or_(not_(a), b)


def iff(a: Expr, b: Expr) -> Expr:
    if a is TRUE:
        return b
    if b is TRUE:
        return a
    if a is FALSE:
        return not_(b)
    if b is FALSE:
        return not_(a)
    if a is b:
        return TRUE
    return Iff(a, b)


def ite(c: Expr, t: Expr, e: Expr) -> Expr:
    if c is TRUE or t is e:
        return t
    if c is FALSE:
        return e
    if t.kind == "B":
        if t is TRUE and e is FALSE:
            return c
        if t is FALSE and e is TRUE:
            return not_(c)
    return Ite(c, t, e)


def eq(a: Expr, b: Expr) -> Expr:
    if a is b:
        return TRUE
    if isinstance(a, IntConst) and isinstance(b, IntConst):
        return TRUE if a.value == b.value else FALSE
    return IntEq(a, b)


def lt(a: Expr, b: Expr) -> Expr:
    if a is b:
        return FALSE
    if isinstance(a, IntConst) and isinstance(b, IntConst):
        return TRUE if a.value < b.value else FALSE
    return IntLt(a, b)


def le(a: Expr, b: Expr) -> Expr:
    return not_(lt(b, a))


def ge(a: Expr, b: Expr) -> Expr:
    return not_(lt(a, b))


def gt(a: Expr, b: Expr) -> Expr:
    return lt(b, a)


def ne(a: Expr, b: Expr) -> Expr:
    return not_(eq(a, b))


def plus(a: Expr, c: int) -> Expr:
    c = int(c)
    if c == 0:
        return a
    if isinstance(a, IntConst):
        return IntConst(a.value + c)
    if isinstance(a, PlusConst):
        return plus(a.arg, a.offset + c)
    return PlusConst(a, c)


def apply(head: Expr, *args: Expr) -> Expr:
    if head.kind == "P":
        return PredApply(head, tuple(args))
    return FuncApply(head, tuple(args))


def lam(params: Iterable[str], body: Expr) -> Expr:
    params = tuple(params)
    if body.kind == "B":
        return LambdaBool(params, body)
    return LambdaInt(params, body)


def conjuncts(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, And):
        return e.args
    if e is TRUE:
        return ()
    return (e,)
