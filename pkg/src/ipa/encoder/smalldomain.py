"""Small-domain instantiation and bit-level encoding of application-free formulas.

Integer constants are treated as offsets from one extra symbol ``ZERO``.
Every atom compares two terms of the form ``sym + c``, so the formula is
invariant under shifting all symbols by the same amount, and any integer
solution can be shifted and gap-compressed into ``[0, D-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from ..logic.expr import (
    And,
    BoolSym,
    Expr,
    FalseLit,
    Iff,
    IntConst,
    IntEq,
    IntLt,
    IntSym,
    Ite,
    Not,
    Or,
    PlusConst,
    TrueLit,
)
from .cnf import CnfBuilder, PropFormula, Signal

ZERO = "$zero"


@dataclass(frozen=True)
class DomainBound:
    """Every integer symbol ranges over ``[0, size-1]``."""

    size: int
    symbols: tuple[str, ...]

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("domain size must be at least 1")

    def range_of(self, name: str) -> tuple[int, int]:
        if name not in self.symbols:
            raise KeyError(name)
        return (0, self.size - 1)

    def as_dict(self) -> dict[str, tuple[int, int]]:
        return {s: (0, self.size - 1) for s in self.symbols}

    @property
    def width(self) -> int:
        return (self.size - 1).bit_length()


def _nodes(e: Expr) -> list[Expr]:
    seen = set()
    out = []
    stack = [e]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        out.append(n)
        stack.extend(reversed(n.children))
    return out


def integer_symbols(e: Expr) -> list[str]:
    """Integer symbols of ``e`` in first-occurrence order, ``ZERO`` last if constants occur."""
    names = []
    has_const = False
    for n in _nodes(e):
        if isinstance(n, IntSym):
            names.append(n.name)
        elif isinstance(n, IntConst):
            has_const = True
    if has_const:
        names.append(ZERO)
    return names


def _effective_offsets(e: Expr) -> set[int]:
    """All ``c`` such that some comparison operand can evaluate to ``sym + c``."""
    memo: dict[Expr, frozenset[int]] = {}

    def term(t: Expr) -> frozenset[int]:
        hit = memo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, IntSym):
            out = frozenset((0,))
        elif isinstance(t, IntConst):
            out = frozenset((t.value,))
        elif isinstance(t, PlusConst):
            out = frozenset(c + t.offset for c in term(t.arg))
        elif isinstance(t, Ite):
            out = term(t.then) | term(t.else_)
        else:
            raise TypeError(f"unexpected integer term {type(t).__name__}")
        memo[t] = out
        return out

    offs = {0}
    for n in _nodes(e):
        if isinstance(n, (IntEq, IntLt)):
            offs |= term(n.left) | term(n.right)
    return offs


def compute_bounds(e: Expr, mode: str = "conservative") -> DomainBound:
    """Domain ``[0, N*(C+1)-1]`` for an application-free formula.

    ``conservative``: C is the sum of ``|c|`` over the distinct offset and
    constant nodes. ``gap``: C is the spread of the effective offsets that
    reach a comparison, which is never larger.
    """
    names = integer_symbols(e)
    if mode == "conservative":
        c = 0
        for n in _nodes(e):
            if isinstance(n, PlusConst):
                c += abs(n.offset)
            elif isinstance(n, IntConst):
                c += abs(n.value)
    elif mode == "gap":
        offs = _effective_offsets(e)
        c = max(offs) - min(offs)
    else:
        raise ValueError(f"unknown bound mode {mode!r}")
    return DomainBound(max(1, len(names) * (c + 1)), tuple(names))


def bitblast(e: Expr, db: DomainBound, preserve: Iterable[str], pin_zero: bool = True) -> PropFormula:
    """Tseitin encoding of ``e`` with integer symbols as unsigned bit-vectors over ``db``.

    With ``pin_zero`` (and constants present) ``ZERO`` is the constant
    ``db.size - 1`` and other symbols range over ``[0, 2*db.size - 2]``;
    otherwise every symbol, ``ZERO`` included, ranges over ``[0, db.size-1]``.

    Preserved Boolean symbols receive variables ``1..k`` in the given order;
    the remaining numbering follows a deterministic depth-first traversal.
    """
    cb = CnfBuilder()
    var_map: dict[str, int] = {}
    preserved: dict[str, int] = {}
    for name in preserve:
        if name not in preserved:
            preserved[name] = var_map[name] = cb.new_var()

    ints: dict[str, list[Signal]] = {}
    size = db.size
    if pin_zero and ZERO in db.symbols:
        # Every symbol lies within size-1 of ZERO in some solution, so
        # fixing ZERO at size-1 and widening the others to [0, 2*size-2]
        # keeps the solution set while turning constants into literals.
        ints[ZERO] = CnfBuilder.bv_const(size - 1)
        size = 2 * size - 1
    width = (size - 1).bit_length()
    limit = CnfBuilder.bv_const(size, width + 1)
    tight = size == 1 << width

    def int_bits(name: str) -> list[Signal]:
        bits = ints.get(name)
        if bits is None:
            if name not in db.symbols:
                raise KeyError(f"integer symbol {name!r} has no domain bound")
            bits = []
            for k in range(width):
                v = cb.new_var()
                var_map[f"{name}[{k}]"] = v
                bits.append(v)
            ints[name] = bits
            if not tight:
                cb.assert_(cb.bv_ult(bits, limit))
        return bits

    tmemo: dict[Expr, tuple[list[Signal], int]] = {}

    def term(t: Expr) -> tuple[list[Signal], int]:
        hit = tmemo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, IntSym):
            out = (int_bits(t.name), 0)
        elif isinstance(t, IntConst):
            out = (int_bits(ZERO), t.value)
        elif isinstance(t, PlusConst):
            bits, off = term(t.arg)
            out = (bits, off + t.offset)
        elif isinstance(t, Ite):
            c = formula(t.cond)
            a, oa = term(t.then)
            b, ob = term(t.else_)
            m = min(oa, ob)
            out = (cb.bv_mux(c, cb.bv_add_const(a, oa - m), cb.bv_add_const(b, ob - m)), m)
        else:
            raise TypeError(f"cannot bit-blast {type(t).__name__}; ackermannize first")
        bits, off = out
        if off and all(isinstance(b, bool) for b in bits):
            value = sum(1 << k for k, b in enumerate(bits) if b) + off
            if value >= 0:
                out = (CnfBuilder.bv_const(value), 0)
        tmemo[t] = out
        return out

    def aligned(l: Expr, r: Expr):
        a, oa = term(l)
        b, ob = term(r)
        if oa > ob:
            a = cb.bv_add_const(a, oa - ob)
        elif ob > oa:
            b = cb.bv_add_const(b, ob - oa)
        return a, b

    fmemo: dict[Expr, Signal] = {}

    def formula(f: Expr) -> Signal:
        hit = fmemo.get(f)
        if hit is not None:
            return hit
        t = type(f)
        if t is TrueLit:
            out = True
        elif t is FalseLit:
            out = False
        elif t is BoolSym:
            v = var_map.get(f.name)
            if v is None:
                v = var_map[f.name] = cb.new_var()
            out = v
        elif t is Not:
            s = formula(f.arg)
            out = (not s) if isinstance(s, bool) else -s
        elif t is And:
            out = cb.and_([formula(a) for a in f.args])
        elif t is Or:
            out = cb.or_([formula(a) for a in f.args])
        elif t is Iff:
            out = cb.iff(formula(f.left), formula(f.right))
        elif t is Ite:
            out = cb.ite(formula(f.cond), formula(f.then), formula(f.else_))
        elif t is IntEq:
            out = cb.bv_eq(*aligned(f.left, f.right))
        elif t is IntLt:
            out = cb.bv_ult(*aligned(f.left, f.right))
        else:
            raise TypeError(f"cannot bit-blast {t.__name__}; ackermannize first")
        fmemo[f] = out
        return out

    cb.assert_(formula(e))
    return PropFormula(cb.num_vars, cb.clauses, var_map, preserved)


def decode_integers(model: Mapping[int, bool], f: PropFormula) -> dict[str, int]:
    """Read the integer symbol values back out of a satisfying assignment."""
    vals: dict[str, int] = {}
    for atom, v in f.var_map.items():
        if atom.endswith("]") and "[" in atom:
            name, _, k = atom[:-1].rpartition("[")
            if model.get(v, False):
                vals[name] = vals.get(name, 0) | (1 << int(k))
            else:
                vals.setdefault(name, 0)
    return vals
