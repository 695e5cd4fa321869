"""Canonical text form of CLU expressions.

``render`` and ``parse_expr`` are inverse on well-formed trees:
``parse_expr(render(e), sorts) is e``. The parser builds raw nodes (no
simplification) so that the round trip is exact; the only sugar it
expands is ``=>``, ``!=``, ``<=``, ``>``, ``>=`` and Boolean ``=``.
"""

from __future__ import annotations

import bisect
import re
from typing import Mapping

from ..errors import ParseError
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
    Sort,
    TrueLit,
    sym,
)

# precedence levels, loosest first
_IMPLIES, _IFF, _OR, _AND, _NOT, _CMP, _SUM, _ATOM = range(1, 9)

MAX_NESTING = 400


def _level(e: Expr) -> int:
    if isinstance(e, Or):
        return _OR
    if isinstance(e, And):
        return _AND
    if isinstance(e, Iff):
        return _IFF
    if isinstance(e, Not):
        if isinstance(e.arg, (IntLt, IntEq)):
            return _CMP
        return _NOT
    if isinstance(e, (IntEq, IntLt)):
        return _CMP
    if isinstance(e, PlusConst):
        return _SUM
    if isinstance(e, IntConst) and e.value < 0:
        return _SUM
    if isinstance(e, (LambdaInt, LambdaBool)):
        return 0
    return _ATOM


def render(e: Expr) -> str:
    memo: dict[Expr, str] = {}
    return _render(e, memo)


def _wrap(child: Expr, need: int, memo) -> str:
    text = _render(child, memo)
    if _level(child) < need:
        return f"({text})"
    return text


def _render(e: Expr, memo) -> str:
    hit = memo.get(e)
    if hit is not None:
        return hit
    if isinstance(e, TrueLit):
        out = "true"
    elif isinstance(e, FalseLit):
        out = "false"
    elif isinstance(e, (BoolSym, IntSym, FuncSym, PredSym, LambdaVar)):
        out = e.name
    elif isinstance(e, IntConst):
        out = str(e.value)
    elif isinstance(e, Not):
        a = e.arg
        if isinstance(a, IntLt):
            out = f"{_wrap(a.left, _SUM, memo)} >= {_wrap(a.right, _SUM, memo)}"
        elif isinstance(a, IntEq):
            out = f"{_wrap(a.left, _SUM, memo)} != {_wrap(a.right, _SUM, memo)}"
        else:
            out = "!" + _wrap(a, _NOT, memo)
    elif isinstance(e, And):
        out = " & ".join(_wrap(a, _NOT, memo) for a in e.args)
    elif isinstance(e, Or):
        out = " | ".join(_wrap(a, _AND, memo) for a in e.args)
    elif isinstance(e, Iff):
        out = f"{_wrap(e.left, _OR, memo)} <=> {_wrap(e.right, _OR, memo)}"
    elif isinstance(e, IntEq):
        out = f"{_wrap(e.left, _SUM, memo)} = {_wrap(e.right, _SUM, memo)}"
    elif isinstance(e, IntLt):
        out = f"{_wrap(e.left, _SUM, memo)} < {_wrap(e.right, _SUM, memo)}"
    elif isinstance(e, PlusConst):
        base = _wrap(e.arg, _SUM, memo)
        if e.offset < 0:
            out = f"{base} - {-e.offset}"
        else:
            out = f"{base} + {e.offset}"
    elif isinstance(e, Ite):
        out = f"ITE({render_in(e.cond, memo)}, {render_in(e.then, memo)}, {render_in(e.else_, memo)})"
    elif isinstance(e, (FuncApply, PredApply)):
        head = _wrap(e.head, _ATOM, memo)
        out = f"{head}({', '.join(render_in(a, memo) for a in e.args)})"
    elif isinstance(e, (LambdaInt, LambdaBool)):
        out = f"LAMBDA ({', '.join(e.params)}). {render_in(e.body, memo)}"
    else:
        raise TypeError(f"cannot render {type(e).__name__}")
    memo[e] = out
    return out


def render_in(e: Expr, memo) -> str:
    return _render(e, memo)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<op><=>|=>|:=|<=|>=|!=|[()=<>&|!+\-,.]))"
)


class _Pos(int):
    """A 1-based column that also carries its line."""

    line: int

    def __new__(cls, col: int, line: int):
        obj = int.__new__(cls, col)
        obj.line = line
        return obj


class _Lexer:
    def __init__(self, text: str, line: int = 1, col0: int = 0):
        self.toks: list[tuple[str, str, _Pos]] = []
        text = text.rstrip()
        starts = [0] + [k + 1 for k, ch in enumerate(text) if ch == "\n"]

        def at(offset: int) -> _Pos:
            row = bisect.bisect_right(starts, offset) - 1
            col = offset - starts[row] + 1 + (col0 if row == 0 else 0)
            return _Pos(col, line + row)

        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
                p = at(bad)
                raise ParseError(f"unexpected character {text[bad:bad + 1]!r}", p.line, p)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), at(m.start(kind))))
            pos = m.end()
        self.i = 0
        self.end = at(len(text))

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", "", self.end)

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def accept(self, value: str) -> bool:
        kind, v, _ = self.peek()
        if kind != "num" and v == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            kind, v, col = self.peek()
            found = v or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", col.line, col)

    def error(self, message: str):
        pos = self.peek()[2]
        raise ParseError(message, pos.line, pos)


class _Parser:
    def __init__(self, lex: _Lexer, sorts: Mapping[str, Sort], consts: Mapping[str, int]):
        self.lex = lex
        self.sorts = sorts
        self.consts = consts
        self.bound: list[str] = []
        self.depth = 0

    def _enter(self, col):
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ParseError(f"expression nested more than {MAX_NESTING} levels deep", col.line, col)

    def parse(self) -> Expr:
        e = self.implies()
        if self.lex.peek()[0] != "eof":
            self.lex.error(f"unexpected token {self.lex.peek()[1]!r}")
        return e

    def _need_bool(self, e: Expr, col) -> Expr:
        if e.kind != "B":
            raise ParseError("expected a formula", col.line, col)
        return e

    def implies(self) -> Expr:
        col = self.lex.peek()[2]
        self._enter(col)
        left = self.iff()
        if self.lex.accept("=>"):
            right = self.implies()
            self._need_bool(left, col)
            left = Or((Not(left), right))
        self.depth -= 1
        return left

    def iff(self) -> Expr:
        left = self.or_()
        while self.lex.accept("<=>"):
            right = self.or_()
            left = Iff(left, right)
        return left

    def or_(self) -> Expr:
        parts = [self.and_()]
        while self.lex.accept("|"):
            parts.append(self.and_())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_(self) -> Expr:
        parts = [self.unary()]
        while self.lex.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Expr:
        nots = 0
        while self.lex.peek()[1] == "!" and self.lex.peek()[0] == "op":
            self.lex.next()
            nots += 1
        e = self.comparison()
        for _ in range(nots):
            e = Not(e)
        return e

    def comparison(self) -> Expr:
        left = self.sum_()
        kind, op, col = self.lex.peek()
        if kind == "op" and op in ("=", "!=", "<", "<=", ">", ">="):
            self.lex.next()
            right = self.sum_()
            if left.kind == "B" and right.kind == "B" and op in ("=", "!="):
                node = Iff(left, right)
                return node if op == "=" else Not(node)
            if left.kind != "I" or right.kind != "I":
                raise ParseError(f"operands of {op!r} must be integer terms", col.line, col)
            if op == "=":
                return IntEq(left, right)
            if op == "!=":
                return Not(IntEq(left, right))
            if op == "<":
                return IntLt(left, right)
            if op == ">":
                return IntLt(right, left)
            if op == "<=":
                return Not(IntLt(right, left))
            return Not(IntLt(left, right))
        return left

    def sum_(self) -> Expr:
        e = self.postfix()
        while True:
            kind, op, col = self.lex.peek()
            if kind == "op" and op in ("+", "-"):
                self.lex.next()
                kind2, num, col2 = self.lex.next()
                if kind2 != "num":
                    raise ParseError("only integer constants may be added to a term", col2.line, col2)
                e = PlusConst(e, int(num) if op == "+" else -int(num))
            else:
                return e

    def postfix(self) -> Expr:
        e = self.atom()
        while self.lex.peek()[1] == "(" and e.kind in ("F", "P"):
            self.lex.next()
            args = self.arglist()
            e = PredApply(e, args) if e.kind == "P" else FuncApply(e, args)
        return e

    def arglist(self) -> tuple[Expr, ...]:
        args = [self.implies()]
        while self.lex.accept(","):
            args.append(self.implies())
        self.lex.expect(")")
        return tuple(args)

    def atom(self) -> Expr:
        kind, v, col = self.lex.next()
        if kind == "num":
            return IntConst(int(v))
        if kind == "op":
            if v == "-" and self.lex.peek()[0] == "num":
                return IntConst(-int(self.lex.next()[1]))
            if v == "(":
                e = self.implies()
                self.lex.expect(")")
                return e
            raise ParseError(f"unexpected token {v!r}", col.line, col)
        if kind == "eof":
            raise ParseError("unexpected end of input", col.line, col)
        if v == "true":
            return TrueLit()
        if v == "false":
            return FalseLit()
        if v == "ITE":
            self.lex.expect("(")
            c = self.implies()
            self.lex.expect(",")
            t = self.implies()
            self.lex.expect(",")
            f = self.implies()
            self.lex.expect(")")
            return Ite(c, t, f)
        if v == "LAMBDA":
            self.lex.expect("(")
            params = []
            while True:
                k, name, pcol = self.lex.next()
                if k != "id":
                    raise ParseError("expected a lambda parameter name", pcol.line, pcol)
                params.append(name)
                if self.lex.accept(")"):
                    break
                self.lex.expect(",")
            self.lex.expect(".")
            self.bound.extend(params)
            try:
                body = self.implies()
            finally:
                del self.bound[len(self.bound) - len(params):]
            if body.kind == "B":
                return LambdaBool(tuple(params), body)
            return LambdaInt(tuple(params), body)
        if v in self.bound:
            return LambdaVar(v)
        if v in self.sorts:
            return sym(v, self.sorts[v])
        if v in self.consts:
            c = self.consts[v]
            return c if isinstance(c, Expr) else IntConst(c)
        raise ParseError(f"undeclared symbol {v!r}", col.line, col)


def parse_expr(
    text: str,
    sorts: Mapping[str, Sort],
    consts: Mapping[str, int] | None = None,
    line: int = 1,
    column: int = 0,
) -> Expr:
    """Parse ``text`` against the symbol sorts in ``sorts``.

    ``consts`` maps alias names to integer constants or to expressions
    that are spliced in unchanged. ``line``/``column``
    offset diagnostics when the text is embedded in a larger file.
    """
    lex = _Lexer(text, line, column)
    return _Parser(lex, sorts, consts or {}).parse()
