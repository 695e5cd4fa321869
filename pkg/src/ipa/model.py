"""Transition systems (V, I, J, q0, delta) and their composition with formulas."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import IpaError, ValidationError
from .logic import Expr, Signature, beta_reduce, free_symbols, substitute, typecheck


class Diagnostic(NamedTuple):
    code: str
    symbol: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.symbol}: {self.message}"


@dataclass
class SystemModel:
    sig: Signature
    init: dict[str, Expr] = field(default_factory=dict)
    next: dict[str, Expr] = field(default_factory=dict)

    @property
    def state_syms(self) -> list[str]:
        return list(self.sig.state)

    @property
    def input_syms(self) -> list[str]:
        return list(self.sig.inputs)

    @property
    def init_syms(self) -> list[str]:
        return list(self.sig.inits)

    def check(self) -> "SystemModel":
        diags = validate(self)
        if diags:
            raise ValidationError("invalid system model:\n  " + "\n  ".join(map(str, diags)), diags)
        return self


def validate(m: SystemModel) -> list[Diagnostic]:
    """All violations of the model invariants; empty when the model is well formed."""
    diags: list[Diagnostic] = []
    sorts = m.sig.sorts
    state = set(m.sig.state)
    for table, code in ((m.init, "UnknownInitTarget"), (m.next, "UnknownNextTarget")):
        for v in table:
            if v not in state:
                diags.append(Diagnostic(code, v, "assignment to a symbol that is not a state variable"))
    scopes = (
        (m.init, "MissingInit", set(m.sig.inits), "initial-state symbols"),
        (m.next, "MissingNext", state | set(m.sig.inputs), "state and input symbols"),
    )
    for v, sort in m.sig.state.items():
        for table, missing, allowed, what in scopes:
            e = table.get(v)
            if e is None:
                diags.append(Diagnostic(missing, v, "no expression given"))
                continue
            stray = sorted(free_symbols(e) - allowed)
            if stray:
                diags.append(Diagnostic("FreeSymbolOutOfScope", v,
                                        f"mentions {', '.join(stray)}; only {what} are allowed"))
                continue
            try:
                got = typecheck(e, sorts)
            except IpaError as exc:
                diags.append(Diagnostic(type(exc).__name__, v, str(exc)))
                continue
            if got != sort:
                diags.append(Diagnostic("SortMismatch", v, f"declared {sort}, expression has sort {got}"))
    return diags


def compose_next(e: Expr, m: SystemModel) -> Expr:
    """``e`` evaluated in the successor state: beta_reduce(e[delta/V])."""
    return beta_reduce(substitute(e, m.next, m.sig.state.keys()))


def compose_init(e: Expr, m: SystemModel) -> Expr:
    """``e`` evaluated in an initial state: beta_reduce(e[q0/V])."""
    return beta_reduce(substitute(e, m.init, m.sig.state.keys()))
