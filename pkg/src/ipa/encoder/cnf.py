"""Clause builder with constant folding and structurally shared Tseitin gates.

A *signal* is either a Python bool (a folded constant) or a non-zero int
DIMACS literal. Bit-vectors are lists of signals, least significant bit
first, read as unsigned integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

Signal = Union[bool, int]


@dataclass
class PropFormula:
    """A CNF with a designated set of preserved (projection) variables."""

    num_vars: int
    clauses: list[tuple[int, ...]]
    var_map: dict[str, int] = field(default_factory=dict)
    preserved: dict[str, int] = field(default_factory=dict)

    @property
    def is_false(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"c pred {name} {var}" for name, var in self.preserved.items()]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"


def neg(s: Signal) -> Signal:
    if s is True:
        return False
    if s is False:
        return True
    return -s


class CnfBuilder:
    def __init__(self):
        self.num_vars = 0
        self.clauses: list[tuple[int, ...]] = []
        self._cache: dict[tuple, int] = {}
        self.unsat = False

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add_clause(self, lits: Iterable[Signal]):
        out = []
        seen = set()
        for s in lits:
            if s is True:
                return
            if s is False:
                continue
            if -s in seen:
                return
            if s not in seen:
                seen.add(s)
                out.append(s)
        if not out:
            self.unsat = True
        self.clauses.append(tuple(out))

    def assert_(self, s: Signal):
        self.add_clause([s])

    # -- gates ---------------------------------------------------------------

    def and_(self, sigs: Iterable[Signal]) -> Signal:
        lits = []
        seen = set()
        for s in sigs:
            if s is False:
                return False
            if s is True or s in seen:
                continue
            if -s in seen:
                return False
            seen.add(s)
            lits.append(s)
        if not lits:
            return True
        if len(lits) == 1:
            return lits[0]
        key = ("and", frozenset(lits))
        g = self._cache.get(key)
        if g is None:
            g = self.new_var()
            for a in lits:
                self.clauses.append((-g, a))
            self.clauses.append(tuple([g] + [-a for a in lits]))
            self._cache[key] = g
        return g

    def or_(self, sigs: Iterable[Signal]) -> Signal:
        return neg(self.and_(neg(s) for s in sigs))

    def xor(self, a: Signal, b: Signal) -> Signal:
        if isinstance(a, bool):
            return neg(b) if a else b
        if isinstance(b, bool):
            return neg(a) if b else a
        if a == b:
            return False
        if a == -b:
            return True
        # normalise polarity: xor(-a, b) = -xor(a, b)
        flip = False
        if a < 0:
            a, flip = -a, not flip
        if b < 0:
            b, flip = -b, not flip
        if a > b:
            a, b = b, a
        key = ("xor", a, b)
        g = self._cache.get(key)
        if g is None:
            g = self.new_var()
            self.clauses += [(-g, a, b), (-g, -a, -b), (g, -a, b), (g, a, -b)]
            self._cache[key] = g
        return -g if flip else g

    def iff(self, a: Signal, b: Signal) -> Signal:
        return neg(self.xor(a, b))

    def ite(self, c: Signal, t: Signal, e: Signal) -> Signal:
        if c is True:
            return t
        if c is False:
            return e
        if t == e and type(t) is type(e):
            return t
        if t is True:
            return self.or_([c, e])
        if t is False:
            return self.and_([neg(c), e])
        if e is True:
            return self.or_([neg(c), t])
        if e is False:
            return self.and_([c, t])
        if t == c:
            return self.or_([c, e])
        if t == -c:
            return self.and_([-c, e])
        if e == c:
            return self.and_([c, t])
        if e == -c:
            return self.or_([-c, t])
        if t == -e:
            return self.iff(c, t)
        if c < 0:
            c, t, e = -c, e, t
        key = ("ite", c, t, e)
        g = self._cache.get(key)
        if g is None:
            g = self.new_var()
            self.clauses += [(-g, -c, t), (-g, c, e), (g, -c, -t), (g, c, -e), (-g, t, e), (g, -t, -e)]
            self._cache[key] = g
        return g

    # -- bit-vectors ---------------------------------------------------------

    @staticmethod
    def bv_const(value: int, width: int | None = None) -> list[Signal]:
        if value < 0:
            raise ValueError("bit-vectors are unsigned")
        if width is None:
            width = value.bit_length()
        return [bool(value >> i & 1) for i in range(width)]

    def bv_add_const(self, bits: Sequence[Signal], k: int) -> list[Signal]:
        """bits + k for a constant k >= 0, one bit wider than needed so it never overflows."""
        if k < 0:
            raise ValueError("constant addend must be non-negative")
        if k == 0:
            return list(bits)
        width = max(len(bits), k.bit_length()) + 1
        out = []
        carry: Signal = False
        for i in range(width):
            a = bits[i] if i < len(bits) else False
            d = bool(k >> i & 1)
            if d:
                out.append(self.iff(a, carry))
                carry = self.or_([a, carry])
            else:
                out.append(self.xor(a, carry))
                carry = self.and_([a, carry])
        return out

    def bv_eq(self, a: Sequence[Signal], b: Sequence[Signal]) -> Signal:
        n = max(len(a), len(b))
        return self.and_(self.iff(_bit(a, i), _bit(b, i)) for i in range(n))

    def bv_ult(self, a: Sequence[Signal], b: Sequence[Signal]) -> Signal:
        """Unsigned a < b."""
        n = max(len(a), len(b))
        lt: Signal = False
        for i in range(n):
            ai, bi = _bit(a, i), _bit(b, i)
            lt = self.ite(self.xor(ai, bi), bi, lt)
        return lt

    def bv_mux(self, c: Signal, a: Sequence[Signal], b: Sequence[Signal]) -> list[Signal]:
        n = max(len(a), len(b))
        return [self.ite(c, _bit(a, i), _bit(b, i)) for i in range(n)]


def _bit(v: Sequence[Signal], i: int) -> Signal:
    return v[i] if i < len(v) else False
