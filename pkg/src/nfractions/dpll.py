"""Self-contained CDCL SAT solver for test-scale formulas.

Two watched literals, first-UIP clause learning, VSIDS-style activities,
phase saving, Luby restarts, and periodic learnt-clause reduction. The
search is deterministic for a fixed formula and seed. Intended for
formulas up to a few tens of thousands of clauses; bigger inputs belong
to an external solver.
"""

from __future__ import annotations

import random
import time
from heapq import heappush, heappop

from .cnf import Cnf, SAT, UNSAT, TIMEOUT

_LUBY_BASE = 128
_ACT_DECAY = 1.0 / 0.95
_ACT_RESCALE = 1e100


def _luby(i: int) -> int:
    # Luby sequence 1,1,2,1,1,2,4,...
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while (1 << k) - 1 != i:
        k -= 1
        if i > (1 << k) - 1:
            i -= (1 << k) - 1
    return 1 << (k - 1)


class InternalSolver:
    def __init__(self, formula: Cnf, seed: int = 0):
        self.nv = formula.num_vars
        nv = self.nv
        self.val = [0] * (2 * nv + 1)        # indexed by lit+nv: 1 true, -1 false
        self.level = [0] * (nv + 1)
        self.reason: list[list[int] | None] = [None] * (nv + 1)
        self.activity = [0.0] * (nv + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.prop_head = 0
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * nv + 1)]
        self.learnts: list[list[int]] = []
        self.act_inc = 1.0
        self.conflicts = 0
        self.ok = True

        rng = random.Random(seed)
        self.saved_phase = [False] + [rng.random() < 0.5 for _ in range(nv)]
        # small random perturbation makes the branching order seed-dependent
        self.heap: list[tuple[float, int]] = []
        for v in range(1, nv + 1):
            self.activity[v] = rng.random() * 1e-6
            heappush(self.heap, (-self.activity[v], v))

        for clause in formula.clauses:
            if not self.ok:
                break
            self._add_input_clause(clause)

    # -- construction ------------------------------------------------------

    def _add_input_clause(self, clause: list[int]) -> None:
        lits = []
        for lit in clause:
            v = self.val[lit + self.nv]
            if v == 1:
                return  # already satisfied at level 0
            if v == 0 and lit not in lits:
                lits.append(lit)
        if not lits:
            self.ok = False
            return
        if len(lits) == 1:
            if not self._enqueue(lits[0], None):
                self.ok = False
            elif self._propagate() is not None:
                self.ok = False
            return
        self._attach(lits)

    def _attach(self, clause: list[int]) -> None:
        self.watches[clause[0] + self.nv].append(clause)
        self.watches[clause[1] + self.nv].append(clause)

    # -- assignment --------------------------------------------------------

    def _enqueue(self, lit: int, reason: list[int] | None) -> bool:
        nv = self.nv
        cur = self.val[lit + nv]
        if cur == 1:
            return True
        if cur == -1:
            return False
        self.val[lit + nv] = 1
        self.val[-lit + nv] = -1
        var = lit if lit > 0 else -lit
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.saved_phase[var] = lit > 0
        self.trail.append(lit)
        return True

    def _propagate(self) -> list[int] | None:
        val = self.val
        nv = self.nv
        watches = self.watches
        trail = self.trail
        while self.prop_head < len(trail):
            lit = trail[self.prop_head]
            self.prop_head += 1
            falselit = -lit
            wl = watches[falselit + nv]
            keep = []
            for idx, cl in enumerate(wl):
                if cl[0] == falselit:
                    cl[0] = cl[1]
                    cl[1] = falselit
                first = cl[0]
                if val[first + nv] == 1:
                    keep.append(cl)
                    continue
                moved = False
                for k in range(2, len(cl)):
                    lk = cl[k]
                    if val[lk + nv] != -1:
                        cl[1] = lk
                        cl[k] = falselit
                        watches[lk + nv].append(cl)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(cl)
                if val[first + nv] == -1:
                    keep.extend(wl[idx + 1:])
                    wl[:] = keep
                    return cl
                self._enqueue(first, cl)
            wl[:] = keep
        return None

    # -- conflict analysis -------------------------------------------------

    def _bump(self, var: int) -> None:
        act = self.activity[var] + self.act_inc
        self.activity[var] = act
        if act > _ACT_RESCALE:
            scale = 1.0 / _ACT_RESCALE
            for v in range(1, self.nv + 1):
                self.activity[v] *= scale
            self.act_inc *= scale
            act = self.activity[var]
        heappush(self.heap, (-act, var))

    def _analyze(self, conflict: list[int]) -> tuple[list[int], int]:
        nv = self.nv
        cur_level = len(self.trail_lim)
        seen = [False] * (nv + 1)
        learnt = [0]  # slot 0 becomes the asserting literal
        counter = 0
        lit = None
        reason = conflict
        idx = len(self.trail) - 1
        while True:
            # reason[0] is the literal the clause asserted; skip it when resolving
            for q in reason if lit is None else reason[1:]:
                var = q if q > 0 else -q
                if not seen[var] and self.level[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self.level[var] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                lit = self.trail[idx]
                idx -= 1
                var = lit if lit > 0 else -lit
                if seen[var]:
                    break
            counter -= 1
            if counter == 0:
                break
            reason = self.reason[var]
            seen[var] = False
        learnt[0] = -lit

        # drop literals implied by the rest of the learnt clause
        minimized = [learnt[0]]
        for q in learnt[1:]:
            var = q if q > 0 else -q
            r = self.reason[var]
            if r is None or any(
                not seen[x if x > 0 else -x] and self.level[x if x > 0 else -x] > 0
                for x in r if x != -q
            ):
                minimized.append(q)
        learnt = minimized

        if len(learnt) == 1:
            return learnt, 0
        # backtrack to the second-highest level in the clause
        back = 0
        swap = 1
        for i in range(1, len(learnt)):
            var = learnt[i] if learnt[i] > 0 else -learnt[i]
            if self.level[var] > back:
                back = self.level[var]
                swap = i
        learnt[1], learnt[swap] = learnt[swap], learnt[1]
        return learnt, back

    def _backtrack(self, target: int) -> None:
        nv = self.nv
        limit = self.trail_lim[target]
        for lit in reversed(self.trail[limit:]):
            var = lit if lit > 0 else -lit
            self.val[lit + nv] = 0
            self.val[-lit + nv] = 0
            self.reason[var] = None
            heappush(self.heap, (-self.activity[var], var))
        del self.trail[limit:]
        del self.trail_lim[target:]
        self.prop_head = len(self.trail)

    def _decide(self) -> int:
        while self.heap:
            act, var = heappop(self.heap)
            if self.val[var + self.nv] == 0 and -act == self.activity[var]:
                return var if self.saved_phase[var] else -var
        for var in range(1, self.nv + 1):
            if self.val[var + self.nv] == 0:
                return var if self.saved_phase[var] else -var
        return 0

    def _reduce_learnts(self) -> None:
        locked = {id(self.reason[lit if lit > 0 else -lit]) for lit in self.trail}
        scored = sorted(self.learnts, key=len)
        keep_n = len(scored) // 2
        kept = []
        for i, cl in enumerate(scored):
            if i < keep_n or len(cl) <= 2 or id(cl) in locked:
                kept.append(cl)
            else:
                for w in (cl[0], cl[1]):
                    try:
                        self.watches[w + self.nv].remove(cl)
                    except ValueError:
                        pass
        self.learnts = kept

    # -- main loop ----------------------------------------------------------

    def solve(self, timeout: float | None = None) -> tuple[str, dict[int, bool] | None]:
        if not self.ok:
            return UNSAT, None
        deadline = time.monotonic() + timeout if timeout else None
        restart_round = 1
        conflicts_left = _LUBY_BASE * _luby(restart_round)
        next_reduce = 4000
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.conflicts += 1
                conflicts_left -= 1
                if deadline is not None and self.conflicts % 256 == 0 and time.monotonic() > deadline:
                    return TIMEOUT, None
                if len(self.trail_lim) == 0:
                    return UNSAT, None
                learnt, back = self._analyze(conflict)
                self._backtrack(back)
                if len(learnt) > 1:
                    self._attach(learnt)
                    self.learnts.append(learnt)
                self._enqueue(learnt[0], learnt if len(learnt) > 1 else None)
                self.act_inc *= _ACT_DECAY
                if self.conflicts >= next_reduce:
                    self._reduce_learnts()
                    next_reduce += 2000 + 500 * (self.conflicts // 4000)
                continue
            if deadline is not None and time.monotonic() > deadline:
                return TIMEOUT, None
            if conflicts_left <= 0:
                restart_round += 1
                conflicts_left = _LUBY_BASE * _luby(restart_round)
                if len(self.trail_lim) > 0:
                    self._backtrack(0)
                continue
            decision = self._decide()
            if decision == 0:
                assignment = {v: self.val[v + self.nv] == 1 for v in range(1, self.nv + 1)}
                return SAT, assignment
            self.trail_lim.append(len(self.trail))
            self._enqueue(decision, None)


def internal_solve(
    formula: Cnf, seed: int = 0, timeout: float | None = None
) -> tuple[str, dict[int, bool] | None]:
    """Solve with the built-in CDCL engine; deterministic for a fixed seed."""
    return InternalSolver(formula, seed=seed).solve(timeout=timeout)
