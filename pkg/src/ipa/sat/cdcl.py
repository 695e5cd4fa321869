"""Conflict-driven clause-learning SAT solver.

Two watched literals per clause, first-UIP learning with recursive
minimisation, VSIDS branching with phase saving, Luby restarts and
activity-based deletion of learnt clauses. Clauses may be added between
calls to ``solve``; the solver then resumes from decision level 0.

Literals are DIMACS integers at the interface. Internally literal ``v``
is ``2v`` and ``-v`` is ``2v+1``.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence


def _luby(x: int) -> int:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x %= size
    return 1 << seq


class Solver:
    def __init__(self, num_vars: int = 0, clauses: Iterable[Sequence[int]] = (), seed: int = 0):
        self.n = 0
        self.val: list[int] = [0, 0]  # per internal literal: 1 true, -1 false, 0 free
        self.level: list[int] = [0]
        self.reason: list[int] = [-1]
        self.activity: list[float] = [0.0]
        self.phase: list[int] = [1]  # saved literal offset: 1 means negative (false-first)
        self.watches: list[list[int]] = [[], []]
        self.clauses: list[list[int] | None] = []
        self.learnt: list[int] = []
        self.cla_act: dict[int, float] = {}
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.heap: list[tuple[float, int]] = []
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.ok = True
        self.seed = seed
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.max_learnt = 2000
        self.ensure_vars(num_vars)
        for c in clauses:
            self.add_clause(c)

    # -- setup ---------------------------------------------------------------

    def ensure_vars(self, n: int):
        while self.n < n:
            self.n += 1
            v = self.n
            self.val += [0, 0]
            self.level.append(0)
            self.reason.append(-1)
            # a tiny seed-dependent perturbation breaks activity ties reproducibly
            self.activity.append(((v * 2654435761 + self.seed) % 1000) * 1e-9 if self.seed else 0.0)
            self.phase.append(1)
            self.watches += [[], []]
            heapq.heappush(self.heap, (-self.activity[v], v))

    def add_clause(self, lits: Sequence[int]) -> bool:
        """Add a clause permanently. Returns False once the clause set is known unsatisfiable."""
        if not self.ok:
            return False
        self._cancel_until(0)
        seen = set()
        out = []
        for d in lits:
            if d == 0:
                raise ValueError("0 is not a literal")
            self.ensure_vars(abs(d))
            l = 2 * d if d > 0 else -2 * d + 1
            if l ^ 1 in seen:
                return True
            if l in seen:
                continue
            v = self.val[l]
            if v == 1:
                return True
            if v == -1:
                continue
            seen.add(l)
            out.append(l)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._enqueue(out[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return self.ok
        self._attach(out)
        return True

    def _attach(self, c: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(c)
        self.watches[c[0]].append(ci)
        self.watches[c[1]].append(ci)
        return ci

    # -- core ----------------------------------------------------------------

    def _enqueue(self, l: int, reason: int):
        val = self.val
        val[l] = 1
        val[l ^ 1] = -1
        v = l >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(l)

    def _propagate(self) -> int:
        """Unit propagation; returns the index of a conflicting clause or -1."""
        val = self.val
        trail = self.trail
        watches = self.watches
        clauses = self.clauses
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c is None:
                    continue
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1], c[k] = lk, false_lit
                        watches[lk].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if val[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return ci
                    val[first] = 1
                    val[first ^ 1] = -1
                    v = first >> 1
                    level[v] = lvl
                    reason[v] = ci
                    trail.append(first)
            del ws[j:]
        return -1

    def _bump_var(self, v: int):
        a = self.activity[v] + self.var_inc
        self.activity[v] = a
        if a > 1e100:
            for u in range(1, self.n + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.n + 1) if self.val[2 * u] == 0]
            heapq.heapify(self.heap)
        elif self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-a, v))

    def _bump_clause(self, ci: int):
        if ci in self.cla_act:
            self.cla_act[ci] += self.cla_inc
            if self.cla_act[ci] > 1e20:
                for k in self.cla_act:
                    self.cla_act[k] *= 1e-20
                self.cla_inc *= 1e-20

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        level = self.level
        reason = self.reason
        seen = [False] * (self.n + 1)
        learnt = [0]
        counter = 0
        p = -1
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        while True:
            self._bump_clause(confl)
            c = self.clauses[confl]
            for q in (c if p == -1 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    self._bump_var(v)
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            v = p >> 1
            confl = reason[v]
            seen[v] = False
            counter -= 1
            if counter == 0:
                break
        learnt[0] = p ^ 1
        # minimisation: drop literals implied by the rest of the clause
        marks = {l >> 1 for l in learnt}
        levels = {level[l >> 1] for l in learnt[1:]}
        out = [learnt[0]]
        cache: dict[int, bool] = {}
        for l in learnt[1:]:
            if reason[l >> 1] == -1 or not self._redundant(l >> 1, marks, levels, cache):
                out.append(l)
        if len(out) == 1:
            back = 0
        else:
            mi = max(range(1, len(out)), key=lambda k: level[out[k] >> 1])
            out[1], out[mi] = out[mi], out[1]
            back = level[out[1] >> 1]
        return out, back

    def _redundant(self, v0: int, marks: set, levels: set, cache: dict) -> bool:
        stack = [v0]
        visited = []
        while stack:
            v = stack.pop()
            r = self.reason[v]
            for q in self.clauses[r][1:]:
                u = q >> 1
                if u in marks or self.level[u] == 0:
                    continue
                known = cache.get(u)
                if known is True:
                    continue
                if known is False or self.reason[u] == -1 or self.level[u] not in levels:
                    for w in visited:
                        cache[w] = False
                    cache[v0] = False
                    return False
                cache[u] = True  # provisional; undone on failure above
                visited.append(u)
                stack.append(u)
        cache[v0] = True
        return True

    def _cancel_until(self, lvl: int):
        if len(self.trail_lim) <= lvl:
            return
        val = self.val
        start = self.trail_lim[lvl]
        for k in range(len(self.trail) - 1, start - 1, -1):
            l = self.trail[k]
            v = l >> 1
            self.phase[v] = l & 1
            val[l] = 0
            val[l ^ 1] = 0
            self.reason[v] = -1
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> int:
        heap = self.heap
        val = self.val
        while heap:
            _, v = heapq.heappop(heap)
            if val[2 * v] == 0:
                return 2 * v + self.phase[v]
        return -1

    def _reduce_db(self):
        locked = {self.reason[l >> 1] for l in self.trail}
        cand = sorted((a, ci) for ci, a in self.cla_act.items() if ci not in locked and len(self.clauses[ci]) > 2)
        for _, ci in cand[: len(cand) // 2]:
            self.clauses[ci] = None
            del self.cla_act[ci]
        self.learnt = [ci for ci in self.learnt if self.clauses[ci] is not None]
        for ws in self.watches:
            ws[:] = [ci for ci in ws if self.clauses[ci] is not None]

    # -- interface -----------------------------------------------------------

    def solve(self) -> bool:
        if not self.ok:
            return False
        self._cancel_until(0)
        if self._propagate() != -1:
            self.ok = False
            return False
        restart = 0
        while True:
            budget = 100 * _luby(restart)
            restart += 1
            status = self._search(budget)
            if status is not None:
                return status

    def _search(self, budget: int):
        conflicts = 0
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = self._attach(learnt)
                    self.learnt.append(ci)
                    self.cla_act[ci] = self.cla_inc
                    self._enqueue(learnt[0], ci)
                self.var_inc /= 0.95
                self.cla_inc /= 0.999
                continue
            if conflicts >= budget:
                self._cancel_until(0)
                return None
            if len(self.learnt) - len(self.trail) > self.max_learnt:
                self._reduce_db()
                self.max_learnt = int(self.max_learnt * 1.1)
            l = self._pick()
            if l == -1:
                return True
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(l, -1)

    def value(self, v: int) -> bool:
        """Value of variable ``v`` in the last model (unassigned variables read as False)."""
        return self.val[2 * v] == 1

    def model(self) -> list[bool]:
        """``model[v]`` for ``v`` in ``1..n``; index 0 is unused."""
        return [False] + [self.val[2 * v] == 1 for v in range(1, self.n + 1)]
