"""SAT-based solving pipeline for the n-fractions puzzle (CSPLib 041)."""

from .cnf import Cnf, parse_dimacs, parse_solver_output, write_dimacs
from .driver import SolveResult, SolverConfig, solve
from .encodings import IntVar
from .model import (
    ModelVars,
    PuzzleInstance,
    ScheduleConfig,
    build_model,
    decode_solution,
    maxl_schedule,
    refine_schedule,
)
from .pipeline import RunRecord, run_schedule, solve_instance
from .verify import (
    Solution,
    VerifyReport,
    brute_force_solve,
    canonicalize,
    format_solution_line,
    lcm_of_divisors,
    parse_solution_line,
    product_model_check,
    verify_solution,
)

__all__ = [
    "Cnf",
    "IntVar",
    "ModelVars",
    "PuzzleInstance",
    "RunRecord",
    "ScheduleConfig",
    "Solution",
    "SolveResult",
    "SolverConfig",
    "VerifyReport",
    "brute_force_solve",
    "build_model",
    "canonicalize",
    "decode_solution",
    "format_solution_line",
    "lcm_of_divisors",
    "maxl_schedule",
    "parse_dimacs",
    "parse_solution_line",
    "parse_solver_output",
    "product_model_check",
    "refine_schedule",
    "run_schedule",
    "solve",
    "solve_instance",
    "verify_solution",
    "write_dimacs",
]

__version__ = "0.1.0"
