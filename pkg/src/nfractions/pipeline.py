"""Encode-solve-decode-verify runs and the maxL search loop."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cnf import ERROR, SAT, TIMEOUT, UNSAT
from .driver import SolveResult, SolverConfig, solve
from .model import (
    PuzzleInstance,
    ScheduleConfig,
    build_model,
    counting_feasible,
    decode_solution,
    maxl_schedule,
    refine_schedule,
)
from .verify import Solution, format_solution_line, verify_solution

INFEASIBLE = "INFEASIBLE"


@dataclass
class RunRecord:
    """One solving attempt, in the column order of the benchmark table."""

    n: int
    maxl: int
    encode_seconds: float = 0.0
    num_clauses: int = 0
    num_vars: int = 0
    solve_seconds: float = 0.0
    status: str = ""
    solution_line: str = ""

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "maxl": self.maxl,
            "encode_seconds": round(self.encode_seconds, 3),
            "num_clauses": self.num_clauses,
            "num_vars": self.num_vars,
            "solve_seconds": round(self.solve_seconds, 3),
            "status": self.status,
            "solution_line": self.solution_line,
        }


class InvalidSolutionError(Exception):
    """A SAT assignment decoded to a solution that fails verification."""


def solve_instance(instance: PuzzleInstance, config: SolverConfig) -> tuple[RunRecord, Solution | None]:
    """Build and solve one (n, maxL) candidate.

    A SAT result is decoded and verified before being reported; an
    invalid solution raises rather than being passed along.
    """
    started = time.monotonic()
    formula, mv = build_model(instance)
    record = RunRecord(
        n=instance.n,
        maxl=instance.maxl,
        encode_seconds=time.monotonic() - started,
        num_clauses=len(formula.clauses),
        num_vars=formula.num_vars,
    )
    result = solve(formula, config)
    record.solve_seconds = result.wall_seconds
    record.status = result.status
    if result.status != SAT:
        return record, None
    solution = decode_solution(result.assignment, mv)
    report = verify_solution(solution)
    if not report.all_ok:
        raise InvalidSolutionError(
            f"n={instance.n} maxL={instance.maxl}: " + "; ".join(report.failures())
        )
    record.solution_line = format_solution_line(solution)
    return record, solution


def _run_pass(
    candidates: list[int],
    n: int,
    config: SolverConfig,
    jobs: int,
) -> tuple[RunRecord | None, Solution | None, list[RunRecord]]:
    """Try candidates smallest-first; return the first SAT.

    With jobs > 1 the candidates run in waves of that size; within a
    wave the smallest SAT maxL wins, so the outcome matches the
    sequential order.
    """
    attempts: list[RunRecord] = []
    wave = max(1, jobs)
    for lo in range(0, len(candidates), wave):
        group = candidates[lo:lo + wave]
        if len(group) == 1 or wave == 1:
            results = [solve_instance(PuzzleInstance(n, m), config) for m in group]
        else:
            with ThreadPoolExecutor(max_workers=wave) as pool:
                results = list(pool.map(
                    lambda m: solve_instance(PuzzleInstance(n, m), config), group
                ))
        for record, solution in results:
            attempts.append(record)
            if record.status == SAT:
                return record, solution, attempts
    return None, None, attempts


def run_schedule(
    n: int,
    config: SolverConfig,
    schedule: ScheduleConfig = ScheduleConfig(),
    jobs: int = 1,
) -> tuple[RunRecord, Solution | None, list[RunRecord]]:
    """Search maxL per the schedule and return the winning record.

    Large-n searches refine after the first coarse hit: the refine pass
    walks from just above the previous multiple of 1000, and its first
    SAT (necessarily a smaller maxL) replaces the coarse result.
    Also returns every attempted record, in order.
    """
    if not counting_feasible(n):
        record = RunRecord(n=n, maxl=0, status=INFEASIBLE)
        return record, None, [record]
    first = maxl_schedule(n, schedule)
    hit, solution, attempts = _run_pass(first, n, config, jobs)
    if hit is not None and n >= schedule.large_n_threshold:
        refined = refine_schedule(hit.maxl, schedule)
        better, better_sol, more = _run_pass(refined, n, config, jobs)
        attempts.extend(more)
        if better is not None:
            return better, better_sol, attempts
    if hit is not None:
        return hit, solution, attempts
    statuses = {rec.status for rec in attempts}
    summary = RunRecord(n=n, maxl=0, status=TIMEOUT if TIMEOUT in statuses else
                        (ERROR if ERROR in statuses else UNSAT))
    return summary, None, attempts
