"""The CLU logic: expressions, sorts, evaluation, substitution, syntax."""

from .check import Signature, typecheck
from .evaluate import FuncValue, Interp, Value, evaluate, evaluate_all
from .expr import (
    BOOL,
    FALSE,
    FUNC,
    INT,
    PRED,
    TRUE,
    Expr,
    Sort,
    and_,
    apply,
    const,
    eq,
    ge,
    gt,
    iff,
    implies,
    ite,
    lam,
    le,
    lt,
    ne,
    not_,
    or_,
    plus,
    sym,
)
from .syntax import parse_expr, render
from .transform import Substitution, beta_reduce, free_symbols, substitute

__all__ = [
    "BOOL", "FALSE", "FUNC", "INT", "PRED", "TRUE", "Expr", "FuncValue", "Interp",
    "Signature", "Sort", "Substitution", "Value", "and_", "apply", "beta_reduce",
    "const", "eq", "evaluate", "evaluate_all", "free_symbols", "ge", "gt", "iff",
    "implies", "ite", "lam", "le", "lt", "ne", "not_", "or_", "parse_expr", "plus",
    "render", "substitute", "sym", "typecheck",
]
