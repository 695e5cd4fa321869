"""The line-oriented model file format.

Each statement starts with a keyword at the beginning of a line; any
following line that does not start with a keyword continues the
statement. ``#`` starts a comment. Declarations may appear in any order
relative to the expressions that use them.

    VAR name : SORT          INPUT name : SORT        INITSYM name : SORT
    INIT name := expr        NEXT name := expr        INDEX name
    PRED name := expr        AXIOM name := expr       PROPERTY name := expr
    CONST name := integer    DEFINE name := expr

``CONST`` names an integer constant and ``DEFINE`` names an expression;
both are expanded where they are used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..abstraction import PredicateBank, SubstitutionSet
from ..errors import ParseError, ValidationError
from ..logic import BOOL, FUNC, INT, PRED, Expr, Signature, Sort, free_symbols, parse_expr, render
from ..logic.expr import IntSym
from ..model import SystemModel, validate

KEYWORDS = ("VAR", "INPUT", "INITSYM", "INIT", "NEXT", "INDEX", "PRED", "AXIOM", "PROPERTY", "CONST", "DEFINE")
_DECL_CLASS = {"VAR": "state", "INPUT": "inputs", "INITSYM": "inits"}
_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_RESERVED = {"ITE", "LAMBDA", "true", "false", "BOOL", "INT", "FUNC", "PRED", *KEYWORDS}


@dataclass
class ModelFile:
    model: SystemModel
    bank: PredicateBank
    properties: dict[str, Expr] = field(default_factory=dict)
    subs: SubstitutionSet | None = None
    consts: dict[str, int] = field(default_factory=dict)
    defines: dict[str, Expr] = field(default_factory=dict)
    options: dict[str, object] = field(default_factory=dict)

    @property
    def pred_sorts(self) -> dict[str, Sort]:
        return {p: BOOL for p in self.bank.names}


@dataclass
class _Stmt:
    keyword: str
    line: int
    text: str  # everything after the keyword, continuation lines joined with newlines
    col: int  # column at which ``text`` starts on ``line``


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _statements(text: str) -> list[_Stmt]:
    out: list[_Stmt] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            if out:
                out[-1].text += "\n"
            continue
        m = re.match(r"(\s*)([A-Z]+)\b", line)
        if m and m.group(2) in KEYWORDS and not m.group(1):
            kw = m.group(2)
            rest = line[m.end():]
            lead = len(rest) - len(rest.lstrip())
            out.append(_Stmt(kw, n, rest.lstrip(), m.end() + lead))
        elif out:
            out[-1].text += "\n" + line
        else:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError(f"expected a statement keyword ({', '.join(KEYWORDS)})", n, col)
    return out


def _split_head(st: _Stmt, sep: str) -> tuple[str, str, int]:
    """``name <sep> rest`` -> (name, rest, column of rest)."""
    m = re.match(rf"({_NAME})\s*{re.escape(sep)}[ \t]*", st.text)
    if not m:
        what = "a name" if not re.match(_NAME, st.text) else f"{sep!r} after the name"
        raise ParseError(f"{st.keyword}: expected {what}", st.line, st.col + 1)
    return m.group(1), st.text[m.end():], st.col + m.end()


def _parse_sort(text: str, line: int, col: int) -> Sort:
    t = text.strip()
    if t == "BOOL":
        return BOOL
    if t == "INT":
        return INT
    m = re.fullmatch(r"(FUNC|PRED)\s*\(\s*(\d+)\s*\)", t)
    if m:
        n = int(m.group(2))
        if n < 1:
            raise ParseError("arity must be at least 1", line, col + 1)
        return FUNC(n) if m.group(1) == "FUNC" else PRED(n)
    raise ParseError(f"unknown sort {t!r} (expected BOOL, INT, FUNC(n) or PRED(n))", line, col + 1)


class _AnyName(dict):
    """Sorts for property text: every identifier not otherwise known reads as a Boolean symbol."""

    def __contains__(self, key):
        return True

    def __getitem__(self, key):
        return dict.get(self, key, BOOL)


def parse_model(text: str) -> ModelFile:
    """Parse and validate a model file. Raises ``ParseError`` or ``ValidationError``."""
    stmts = _statements(text)
    sig = Signature()
    seen: dict[str, int] = {}
    consts: dict[str, int] = {}
    index_syms: list[str] = []
    pred_order: list[tuple[str, str, _Stmt, str, int]] = []  # (keyword, name, stmt, body, col)

    def claim(name: str, st: _Stmt):
        if name in _RESERVED:
            raise ParseError(f"{name!r} is a reserved word", st.line, st.col + 1)
        if name in seen:
            raise ParseError(f"{name!r} already declared on line {seen[name]}", st.line, st.col + 1)
        seen[name] = st.line

    # pass 1: declarations
    for st in stmts:
        kw = st.keyword
        if kw in _DECL_CLASS:
            name, rest, col = _split_head(st, ":")
            claim(name, st)
            sig.declare(_DECL_CLASS[kw], name, _parse_sort(rest, st.line, col))
        elif kw == "INDEX":
            name = st.text.strip()
            if not re.fullmatch(_NAME, name):
                raise ParseError("INDEX: expected a single name", st.line, st.col + 1)
            claim(name, st)
            sig.declare("indices", name, INT)
            index_syms.append(name)
        elif kw == "CONST":
            name, rest, col = _split_head(st, ":=")
            claim(name, st)
            if not re.fullmatch(r"\s*-?\d+\s*", rest):
                raise ParseError("CONST: expected an integer literal", st.line, col + 1)
            consts[name] = int(rest)
        elif kw in ("PRED", "AXIOM"):
            name, rest, col = _split_head(st, ":=")
            claim(name, st)
            sig.declare("preds", name, BOOL)
            pred_order.append((kw, name, st, rest, col))
        elif kw == "DEFINE":
            name, _, _ = _split_head(st, ":=")
            claim(name, st)

    sorts = sig.sorts
    expr_sorts = {n: s for n, s in sorts.items() if n not in sig.preds}
    aliases: dict[str, object] = dict(consts)
    defines: dict[str, Expr] = {}
    init: dict[str, Expr] = {}
    nxt: dict[str, Expr] = {}
    props: dict[str, Expr] = {}
    defs: dict[str, Expr] = {}
    axioms: list[str] = []

    # pass 2: expressions (DEFINE bodies are expanded in file order)
    for st in stmts:
        kw = st.keyword
        if kw == "DEFINE":
            name, rest, col = _split_head(st, ":=")
            e = parse_expr(rest, expr_sorts, aliases, st.line, col)
            defines[name] = e
            aliases[name] = e
        elif kw in ("INIT", "NEXT"):
            name, rest, col = _split_head(st, ":=")
            table = init if kw == "INIT" else nxt
            if name in table:
                raise ParseError(f"second {kw} for {name!r}", st.line, st.col + 1)
            table[name] = parse_expr(rest, expr_sorts, aliases, st.line, col)
        elif kw == "PROPERTY":
            name, rest, col = _split_head(st, ":=")
            claim(name, st)
            known = _AnyName(sig.preds)
            props[name] = parse_expr(rest, known, {}, st.line, col)
    for kw, name, st, rest, col in pred_order:
        defs[name] = parse_expr(rest, expr_sorts, aliases, st.line, col)
        if kw == "AXIOM":
            axioms.append(name)

    model = SystemModel(sig, init, nxt)
    bank = PredicateBank(index_syms, defs, axioms)
    diags = [str(d) for d in validate(model)]
    diags += bank.validate(model)
    for name, e in props.items():
        stray = sorted(free_symbols(e) - set(defs))
        if stray:
            diags.append(f"UndeclaredPredicate: {name}: property mentions {', '.join(stray)}, which are not predicates")
    if diags:
        raise ValidationError("invalid model:\n  " + "\n  ".join(diags), diags)
    return ModelFile(model, bank, props, None, consts, defines)


def load_model(path: str) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def parse_substitutions(text: str, mf: ModelFile) -> SubstitutionSet:
    """One substitution per line, ``x := term; y := term``; unmentioned indices map to themselves."""
    X = mf.bank.index_syms
    sig = mf.model.sig
    sorts = {n: s for n, s in sig.sorts.items() if n not in sig.preds}
    aliases = {**mf.consts, **mf.defines}
    subs = SubstitutionSet(X)
    for n, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        sub = {x: IntSym(x) for x in X}
        pos = 0
        for part in line.split(";"):
            if not part.strip():
                pos += len(part) + 1
                continue
            m = re.match(rf"\s*({_NAME})\s*:=\s*", part)
            if not m:
                raise ParseError("expected 'index := term'", n, pos + 1)
            x = m.group(1)
            if x not in X:
                raise ParseError(f"{x!r} is not an index symbol", n, pos + m.start(1) + 1)
            t = parse_expr(part[m.end():], sorts, aliases, n, pos + m.end())
            if t.kind != "I":
                raise ParseError(f"replacement for {x!r} is not an integer term", n, pos + m.end() + 1)
            sub[x] = t
            pos += len(part) + 1
        subs.add(sub)
    if len(subs) == 0:
        raise ParseError("substitution file lists no substitutions", 1, 1)
    return subs


def _sort_text(s: Sort) -> str:
    return s.kind if s.kind in ("BOOL", "INT") else f"{s.kind}({s.arity})"


def render_model(mf: ModelFile) -> str:
    """Text that parses back to the same model (aliases are printed expanded)."""
    sig = mf.model.sig
    lines = []
    for name, value in mf.consts.items():
        lines.append(f"CONST {name} := {value}")
    for kw, table in (("VAR", sig.state), ("INPUT", sig.inputs), ("INITSYM", sig.inits)):
        for name, s in table.items():
            lines.append(f"{kw} {name} : {_sort_text(s)}")
    for x in mf.bank.index_syms:
        lines.append(f"INDEX {x}")
    for name, e in mf.model.init.items():
        lines.append(f"INIT {name} := {render(e)}")
    for name, e in mf.model.next.items():
        lines.append(f"NEXT {name} := {render(e)}")
    for name, e in mf.bank.defs.items():
        kw = "AXIOM" if name in mf.bank.axioms else "PRED"
        lines.append(f"{kw} {name} := {render(e)}")
    for name, e in mf.properties.items():
        lines.append(f"PROPERTY {name} := {render(e)}")
    return "\n".join(lines) + "\n"
