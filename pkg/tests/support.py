"""Shared test helpers: an independent mini SAT engine for oracle-side
enumeration, plain unit propagation, and the published puzzle data."""

from __future__ import annotations

import itertools
from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"

# Digit solution printed for n=39: its fractions sum to exactly 1, but the
# common-multiple column next to it (8400) is not divisible by the divisor
# lcm (16800), so it is kept out of the fully-consistent corpus file.
N39_ROW = ("39 8400 1 25 1 75 1 75 1 75 1 75 1 75 1 75 1 75 3 75 3 75 3 75 3 75 3 75 "
           "2 84 2 84 2 84 2 84 2 84 2 84 2 84 2 84 2 84 2 84 2 84 3 84 3 84 "
           "1 96 1 96 1 96 1 96 1 96 2 96 3 96 3 96 3 96 3 96 3 96 3 96 7 96")

# Reported smallest working maxL per n in the solver benchmark.
PUBLISHED_MAXL = {
    3: 300, 4: 100, 5: 100, 6: 100, 7: 100, 8: 100, 9: 100, 10: 100,
    11: 100, 12: 100, 13: 100, 14: 100, 15: 120, 16: 100, 17: 100,
    18: 300, 19: 100, 20: 300, 21: 300, 22: 300, 23: 300, 24: 300,
    25: 300, 26: 300, 27: 400, 28: 300, 29: 400, 30: 500, 31: 500,
    32: 500, 33: 1900, 34: 500, 35: 2400, 36: 2400, 37: 2400, 38: 2400,
    39: 8400,
}


def known_solution_lines() -> list[str]:
    lines = []
    for raw in (DATA_DIR / "known_solutions.txt").read_text().splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


# ---------------------------------------------------------------------------
# oracle-side SAT machinery, deliberately separate from the package solver

def tiny_models(formula):
    """All satisfying assignments by trying every combination (<= 22 vars)."""
    assert formula.num_vars <= 22, "too many variables for raw enumeration"
    for bits in itertools.product((False, True), repeat=formula.num_vars):
        assign = {v: bits[v - 1] for v in range(1, formula.num_vars + 1)}
        if all(any(assign[abs(l)] == (l > 0) for l in cl) for cl in formula.clauses):
            yield assign


class MiniSolver:
    """Small recursive DPLL with unit propagation, reusable across queries."""

    def __init__(self, num_vars: int, clauses: list[list[int]]):
        self.nv = num_vars
        self.clauses = [list(c) for c in clauses]
        self.occur: dict[int, list[int]] = {}  # literal -> clauses containing it
        for idx, cl in enumerate(self.clauses):
            for lit in cl:
                self.occur.setdefault(lit, []).append(idx)

    def solve(self, assumptions: list[int]) -> bool:
        assign: dict[int, int] = {}  # var -> +1/-1
        if any(not cl for cl in self.clauses):
            return False
        return self._search(assign, list(assumptions))

    def _value(self, assign, lit):
        s = assign.get(abs(lit), 0)
        if s == 0:
            return 0
        return s if lit > 0 else -s

    def _propagate(self, assign, queue):
        while queue:
            lit = queue.pop()
            cur = self._value(assign, lit)
            if cur == -1:
                return False
            if cur == 1:
                continue
            assign[abs(lit)] = 1 if lit > 0 else -1
            for idx in self.occur.get(-lit, ()):
                unassigned = None
                satisfied = False
                count = 0
                for other in self.clauses[idx]:
                    v = self._value(assign, other)
                    if v == 1:
                        satisfied = True
                        break
                    if v == 0:
                        unassigned = other
                        count += 1
                        if count > 1:
                            break
                if satisfied or count > 1:
                    continue
                if count == 0:
                    return False
                queue.append(unassigned)
        return True

    def _search(self, assign, queue) -> bool:
        snapshot = dict(assign)
        if not self._propagate(assign, queue):
            assign.clear()
            assign.update(snapshot)
            return False
        free = None
        for cl in self.clauses:
            decided = False
            for lit in cl:
                v = self._value(assign, lit)
                if v == 1:
                    decided = True
                    break
                if v == 0 and free is None:
                    free = abs(lit)
            if not decided and free is not None:
                break
        if free is None:
            # every clause satisfied (vars not in clauses are irrelevant)
            return True
        for phase in (free, -free):
            if self._search(assign, [phase]):
                return True
        assign.clear()
        assign.update(snapshot)
        return False


def unit_propagate(num_vars: int, clauses: list[list[int]], units: list[int]):
    """Plain unit propagation from the given units.

    Returns (ok, assignment dict var->bool). ok is False on conflict.
    """
    assign: dict[int, int] = {}
    occur: dict[int, list[int]] = {}  # literal -> clauses containing it
    for idx, cl in enumerate(clauses):
        for lit in cl:
            occur.setdefault(lit, []).append(idx)
    queue = list(units)
    while queue:
        lit = queue.pop()
        var = abs(lit)
        want = 1 if lit > 0 else -1
        cur = assign.get(var, 0)
        if cur == -want:
            return False, {}
        if cur == want:
            continue
        assign[var] = want
        for idx in occur.get(-lit, ()):
            unassigned = None
            count = 0
            satisfied = False
            for other in clauses[idx]:
                s = assign.get(abs(other), 0)
                v = 0 if s == 0 else (s if other > 0 else -s)
                if v == 1:
                    satisfied = True
                    break
                if v == 0:
                    unassigned = other
                    count += 1
            if satisfied:
                continue
            if count == 0:
                return False, {}
            if count == 1:
                queue.append(unassigned)
    return True, {v: s == 1 for v, s in assign.items()}


# ---------------------------------------------------------------------------
# forcing integer views and computing encoder relations

def units_for(var, value) -> list[int]:
    """Unit literals pinning an IntVar (either or both views) to a value."""
    out = []
    if var.order is not None:
        for k, lit in enumerate(var.order):
            out.append(lit if var.lb + 1 + k <= value else -lit)
    if var.bits is not None:
        for k, lit in enumerate(var.bits):
            out.append(lit if (value >> k) & 1 else -lit)
    return out


def encoded_relation(formula, int_vars, bool_lits=()) -> set[tuple[int, ...]]:
    """The set of integer/bool tuples realized by some model of the formula.

    Every satisfying assignment decodes to exactly one tuple, so the decoded
    model set equals {t : formula + units(t) is satisfiable}.
    """
    solver = MiniSolver(formula.num_vars, formula.clauses)
    domains = [range(v.lb, v.ub + 1) for v in int_vars]
    domains += [range(0, 2) for _ in bool_lits]
    out = set()
    for tup in itertools.product(*domains):
        units = []
        for var, value in zip(int_vars, tup):
            units.extend(units_for(var, value))
        for lit, value in zip(bool_lits, tup[len(int_vars):]):
            units.append(lit if value else -lit)
        if solver.solve(units):
            out.add(tup)
    return out
