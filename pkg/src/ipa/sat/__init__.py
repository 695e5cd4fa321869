"""Satisfiability and projected solution enumeration for ``PropFormula`` values."""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..abstraction import CubeSet
from ..encoder.cnf import PropFormula
from ..errors import ExternalSolverFailure
from .cdcl import Solver

SAT = "SAT"
UNSAT = "UNSAT"


@dataclass(frozen=True)
class SatResult:
    status: str
    model: tuple[bool, ...] = ()  # model[v] for v in 1..n, index 0 unused

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def __getitem__(self, v: int) -> bool:
        return self.model[v]


class InternalBackend:
    """The bundled CDCL solver, kept alive across blocking-clause additions."""

    name = "internal"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def session(self, f: PropFormula) -> "_InternalSession":
        return _InternalSession(f, self.seed)


class _InternalSession:
    def __init__(self, f: PropFormula, seed: int):
        self.solver = Solver(f.num_vars, f.clauses, seed=seed)

    def add_clause(self, lits: Sequence[int]):
        self.solver.add_clause(lits)

    def solve(self) -> SatResult:
        if self.solver.solve():
            return SatResult(SAT, tuple(self.solver.model()))
        return SatResult(UNSAT)


class DimacsBackend:
    """An external solver run as ``<command> <file.cnf>``.

    The process must print ``s SATISFIABLE`` / ``s UNSATISFIABLE`` and, when
    satisfiable, the model on ``v`` lines. Every call re-sends the full
    clause list including blocking clauses added so far.
    """

    def __init__(self, command: str, timeout: float | None = None):
        self.command = shlex.split(command)
        if not self.command:
            raise ValueError("empty external solver command")
        self.timeout = timeout
        self.name = f"dimacs:{command}"

    def session(self, f: PropFormula) -> "_DimacsSession":
        return _DimacsSession(self, f)

    def run(self, num_vars: int, clauses: Iterable[Sequence[int]], header: str = "") -> SatResult:
        clauses = list(clauses)
        fd, path = tempfile.mkstemp(suffix=".cnf", prefix="ipa-")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(header)
                fh.write(f"p cnf {num_vars} {len(clauses)}\n")
                for c in clauses:
                    fh.write(" ".join(map(str, c)) + " 0\n")
            try:
                proc = subprocess.run(self.command + [path], capture_output=True, text=True,
                                      timeout=self.timeout)
            except (OSError, subprocess.TimeoutExpired) as exc:
                raise ExternalSolverFailure(f"could not run {self.command[0]!r}: {exc}") from exc
        finally:
            os.unlink(path)
        return parse_solver_output(proc.stdout, num_vars, proc.returncode, proc.stderr)


def parse_solver_output(out: str, num_vars: int, returncode: int = 0, stderr: str = "") -> SatResult:
    status = None
    values: dict[int, bool] = {}
    for line in out.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                status = SAT
            elif word == "UNSATISFIABLE":
                status = UNSAT
            else:
                raise ExternalSolverFailure(f"external solver answered {word!r}")
        elif line.startswith("v "):
            for tok in line[2:].split():
                d = int(tok)
                if d:
                    values[abs(d)] = d > 0
    if status is None:
        detail = stderr.strip().splitlines()[-1:] or [f"exit code {returncode}"]
        raise ExternalSolverFailure(f"external solver gave no status line ({detail[0]})")
    if status == UNSAT:
        return SatResult(UNSAT)
    return SatResult(SAT, (False,) + tuple(values.get(v, False) for v in range(1, num_vars + 1)))


class _DimacsSession:
    def __init__(self, backend: DimacsBackend, f: PropFormula):
        self.backend = backend
        self.f = f
        self.extra: list[tuple[int, ...]] = []
        self.header = "".join(f"c pred {n} {v}\n" for n, v in f.preserved.items())

    def add_clause(self, lits: Sequence[int]):
        self.extra.append(tuple(lits))

    def solve(self) -> SatResult:
        r = self.backend.run(self.f.num_vars, self.f.clauses + self.extra, self.header)
        if r.sat and not satisfies(r.model, self.f.clauses + self.extra):
            raise ExternalSolverFailure("external solver returned a model that violates the formula")
        return r


def make_backend(spec: str = "internal", seed: int = 0):
    """``internal`` or ``dimacs:<command>``."""
    if spec == "internal":
        return InternalBackend(seed)
    if spec.startswith("dimacs:"):
        return DimacsBackend(spec[len("dimacs:"):])
    raise ValueError(f"unknown SAT backend {spec!r} (expected 'internal' or 'dimacs:<command>')")


def satisfies(model: Sequence[bool], clauses: Iterable[Sequence[int]]) -> bool:
    return all(any(model[l] if l > 0 else not model[-l] for l in c) for c in clauses)


def solve(f: PropFormula, backend=None) -> SatResult:
    backend = backend or InternalBackend()
    return backend.session(f).solve()


def all_sat_project(f: PropFormula, preserve: Sequence[str] | None = None, backend=None,
                    exclude: Iterable[int] = (), stats: dict | None = None) -> CubeSet:
    """Every assignment to ``preserve`` that extends to a model of ``f``.

    Each model found is blocked by a clause over the preserved variables
    only. Cubes listed in ``exclude`` (bit ``j`` = value of ``preserve[j]``)
    are blocked before the first call and are not part of the result.
    ``stats['calls']`` receives the number of solver calls.
    """
    names = list(f.preserved) if preserve is None else list(preserve)
    missing = [n for n in names if n not in f.preserved]
    if missing:
        raise KeyError(f"not preserved by the encoding: {', '.join(missing)}")
    pvars = [f.preserved[n] for n in names]
    backend = backend or InternalBackend()
    session = backend.session(f)

    def block(cube: int):
        session.add_clause([-v if cube >> j & 1 else v for j, v in enumerate(pvars)])

    for cube in exclude:
        block(cube)
    found = []
    calls = 0
    while True:
        calls += 1
        r = session.solve()
        if not r.sat:
            break
        cube = sum(1 << j for j, v in enumerate(pvars) if r.model[v])
        found.append(cube)
        block(cube)
    if stats is not None:
        stats["calls"] = stats.get("calls", 0) + calls
    return CubeSet(names, found)


__all__ = [
    "SAT", "UNSAT", "DimacsBackend", "InternalBackend", "SatResult", "Solver", "all_sat_project",
    "make_backend", "parse_solver_output", "satisfies", "solve",
]
