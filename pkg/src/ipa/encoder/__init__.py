"""Propositional encoding of quantifier-free formulas, preserving solutions over chosen Boolean symbols."""

from __future__ import annotations

from typing import Iterable

from ..logic.expr import Expr
from ..logic.transform import beta_reduce
from .ackermann import ackermannize
from .cnf import CnfBuilder, PropFormula
from .smalldomain import ZERO, DomainBound, bitblast, compute_bounds, decode_integers, integer_symbols


def encode(e: Expr, preserve: Iterable[str], bound_mode: str = "conservative") -> PropFormula:
    """Equisatisfiable CNF whose solutions projected onto ``preserve`` match those of ``e``."""
    if e.kind != "B":
        raise TypeError("encode expects a formula")
    flat, _ = ackermannize(beta_reduce(e))
    return bitblast(flat, compute_bounds(flat, bound_mode), list(preserve))


__all__ = [
    "ZERO", "CnfBuilder", "DomainBound", "PropFormula", "ackermannize", "bitblast",
    "compute_bounds", "decode_integers", "encode", "integer_symbols",
]
