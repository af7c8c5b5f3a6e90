"""Runs a SAT backend on a CNF: external process over DIMACS files, or
the built-in CDCL engine.

External solvers are invoked through a command template containing the
placeholder {cnf}; they must print SAT-competition output ("s ..."
status, "v ..." values). Exit codes 10/20 are accepted as corroboration
but the printed lines are authoritative. Every SAT assignment, from
either backend, is re-checked against all clauses before it is
returned, so a buggy solver fails loudly instead of corrupting results.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass

from .cnf import Cnf, ERROR, SAT, TIMEOUT, UNSAT, check_assignment, parse_solver_output, write_dimacs
from .dpll import internal_solve

EXTERNAL = "external"
INTERNAL = "internal"
AUTO = "auto"

# Largest formula the internal engine is expected to handle comfortably.
INTERNAL_CLAUSE_LIMIT = 50_000

SOLVER_ENV_VAR = "NFRAC_SOLVER_CMD"
_KNOWN_SOLVERS = ("kissat", "cadical", "varisat", "glucose", "picosat", "minisat22", "lingeling")


@dataclass
class SolverConfig:
    mode: str = EXTERNAL
    command_template: str = ""   # e.g. "varisat {cnf}"
    timeout: float = 600.0
    seed: int = 0                # branching tie-break for the internal engine

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass
class SolveResult:
    status: str  # SAT | UNSAT | TIMEOUT | ERROR
    assignment: dict[int, bool] | None = None
    wall_seconds: float = 0.0
    detail: str = ""


def default_solver_command() -> str | None:
    """Solver command from the environment, or a known solver on PATH."""
    env = os.environ.get(SOLVER_ENV_VAR)
    if env:
        return env
    for name in _KNOWN_SOLVERS:
        exe = shutil.which(name)
        if exe:
            return f"{exe} {{cnf}}"
    return None


def _finish(formula: Cnf, status: str, assignment, started: float, detail: str = "") -> SolveResult:
    wall = time.monotonic() - started
    if status != SAT:
        return SolveResult(status, None, wall, detail)
    # make the assignment total, then re-check it unconditionally
    total = {v: bool(assignment.get(v, False)) for v in range(1, formula.num_vars + 1)}
    if not check_assignment(formula, total):
        return SolveResult(ERROR, None, wall, "solver returned an assignment that violates the formula")
    return SolveResult(SAT, total, wall, detail)


def _solve_external(formula: Cnf, config: SolverConfig) -> SolveResult:
    started = time.monotonic()
    if "{cnf}" not in config.command_template:
        return SolveResult(ERROR, detail="command template lacks the {cnf} placeholder")
    with tempfile.TemporaryDirectory(prefix="nfrac-") as tmp:
        path = os.path.join(tmp, "instance.cnf")
        with open(path, "w") as sink:
            write_dimacs(formula, sink)
        argv = shlex.split(config.command_template.replace("{cnf}", shlex.quote(path)))
        try:
            proc = subprocess.run(
                argv, capture_output=True, text=True, timeout=config.timeout
            )
        except subprocess.TimeoutExpired:
            return SolveResult(TIMEOUT, None, time.monotonic() - started)
        except OSError as exc:
            return SolveResult(ERROR, None, time.monotonic() - started, f"failed to run solver: {exc}")
    parsed = parse_solver_output(proc.stdout)
    if parsed.status == SAT:
        return _finish(formula, SAT, parsed.assignment, started)
    if parsed.status == UNSAT:
        return _finish(formula, UNSAT, None, started)
    detail = parsed.diagnostic
    if proc.returncode == 10 or proc.returncode == 20:
        # exit code says SAT/UNSAT but output was unusable; stay conservative
        detail += f" (exit code {proc.returncode})"
    if proc.stderr:
        detail += f"; stderr: {proc.stderr.strip()[:500]}"
    return SolveResult(ERROR, None, time.monotonic() - started, detail)


def _solve_internal(formula: Cnf, config: SolverConfig) -> SolveResult:
    started = time.monotonic()
    status, assignment = internal_solve(formula, seed=config.seed, timeout=config.timeout)
    return _finish(formula, status, assignment, started)


def solve(formula: Cnf, config: SolverConfig) -> SolveResult:
    if config.mode == INTERNAL:
        return _solve_internal(formula, config)
    if config.mode == EXTERNAL:
        return _solve_external(formula, config)
    if config.mode == AUTO:
        # prefer a configured external solver; otherwise the internal
        # engine may stand in, but only at sizes it can realistically crack
        if config.command_template:
            return _solve_external(formula, config)
        if len(formula.clauses) <= INTERNAL_CLAUSE_LIMIT:
            result = _solve_internal(formula, config)
            result.detail = (result.detail + " [no external solver configured; used the internal engine]").strip()
            return result
        return SolveResult(
            ERROR,
            detail=(
                f"no external solver configured and the formula "
                f"({len(formula.clauses)} clauses) exceeds the internal engine's "
                f"{INTERNAL_CLAUSE_LIMIT}-clause comfort zone; set {SOLVER_ENV_VAR} "
                f"or pass a solver command"
            ),
        )
    return SolveResult(ERROR, detail=f"unknown solver mode {config.mode!r}")
