"""Command-line interface: encode, solve, verify, bench, oracle.

Exit codes: 0 solved/valid, 1 failed verification, 2 usage or I/O or
solver error, 20 unsatisfiable/none found, 30 timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .cnf import ERROR, SAT, TIMEOUT, UNSAT, write_dimacs
from .driver import AUTO, SolverConfig, default_solver_command
from .model import (
    LARGEST_SOLVABLE_N,
    PuzzleInstance,
    ScheduleConfig,
    build_model,
    counting_feasible,
    varmap_digest,
    write_varmap,
)
from .pipeline import INFEASIBLE, InvalidSolutionError, RunRecord, run_schedule, solve_instance
from .verify import brute_force_solve, format_solution_line, parse_solution_line, verify_solution

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_UNSAT = 20
EXIT_TIMEOUT = 30

# Published solving times climb into the hours from n=35 up; don't start
# such a run by accident.
LONG_RUN_N = 35


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _feasibility_warnings(n: int) -> None:
    if not counting_feasible(n):
        _warn(f"n={n} is infeasible by the counting pre-check (3n >= 9 fails); CNF will be UNSAT")
    elif n > LARGEST_SOLVABLE_N:
        _warn(f"the puzzle is known to have no solution for n > {LARGEST_SOLVABLE_N}")


def cmd_encode(args) -> int:
    instance = PuzzleInstance(args.n, args.max_l)
    _feasibility_warnings(args.n)
    started = time.monotonic()
    formula, mv = build_model(instance)
    encode_s = time.monotonic() - started
    digest = varmap_digest(mv)
    comments = [
        f"n-fractions instance n={args.n} maxl={args.max_l}",
        f"varmap sha256 {digest}",
    ]
    try:
        with open(args.out, "w") as sink:
            write_dimacs(formula, sink, comments=comments)
        with open(args.map, "w") as sink:
            write_varmap(mv, sink)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"encoded n={args.n} maxl={args.max_l}: "
          f"{formula.num_vars} vars, {len(formula.clauses)} clauses, {encode_s:.2f}s")
    print(f"cnf written to {args.out}, variable map to {args.map}")
    return EXIT_OK


def _solver_config(args) -> SolverConfig:
    command = args.solver_cmd or default_solver_command() or ""
    return SolverConfig(mode=AUTO, command_template=command,
                        timeout=args.timeout, seed=args.seed)


def _schedule_config(args) -> ScheduleConfig:
    return ScheduleConfig(large_n_threshold=args.schedule_threshold, cap=args.schedule_cap)


def _print_record(record: RunRecord, fmt: str) -> None:
    if fmt == "records":
        print(json.dumps(record.as_dict()))
    else:
        line = (f"n={record.n} maxl={record.maxl} encode={record.encode_seconds:.2f}s "
                f"clauses={record.num_clauses} vars={record.num_vars} "
                f"solve={record.solve_seconds:.2f}s status={record.status}")
        print(line)
        if record.solution_line:
            print(record.solution_line)


def _status_exit(status: str) -> int:
    return {
        SAT: EXIT_OK,
        UNSAT: EXIT_UNSAT,
        INFEASIBLE: EXIT_UNSAT,
        TIMEOUT: EXIT_TIMEOUT,
        ERROR: EXIT_USAGE,
    }.get(status, EXIT_USAGE)


def cmd_solve(args) -> int:
    if (args.max_l is None) == (not args.schedule):
        print("error: pass exactly one of --max-l or --schedule", file=sys.stderr)
        return EXIT_USAGE
    if args.n >= LONG_RUN_N and not args.long_run:
        print(
            f"error: solving n={args.n} is expected to take hours; "
            "pass --long-run to proceed (encoding via 'encode' needs no flag)",
            file=sys.stderr,
        )
        return EXIT_USAGE
    _feasibility_warnings(args.n)
    config = _solver_config(args)
    try:
        if args.max_l is not None:
            if not counting_feasible(args.n):
                print(f"n={args.n} infeasible by counting pre-check", file=sys.stderr)
            record, solution = solve_instance(PuzzleInstance(args.n, args.max_l), config)
        else:
            record, solution, _ = run_schedule(
                args.n, config, _schedule_config(args), jobs=args.jobs
            )
    except InvalidSolutionError as exc:
        print(f"error: solver produced an invalid solution: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if record.status == INFEASIBLE:
        print(f"n={args.n} infeasible by counting pre-check", file=sys.stderr)
    _print_record(record, args.format)
    return _status_exit(record.status)


def _verify_lines(lines) -> int:
    total = passed = 0
    code = EXIT_OK
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        total += 1
        try:
            sol = parse_solution_line(line)
            report = verify_solution(sol)
        except ValueError as exc:
            print(f"row {total}: structural error: {exc}")
            code = EXIT_INVALID
            continue
        if report.all_ok:
            passed += 1
            print(f"row {total}: ok (n={sol.n}, lcm={report.lcm})")
        else:
            code = EXIT_INVALID
            print(f"row {total}: FAILED: " + "; ".join(report.failures()))
    print(f"{passed}/{total} rows verified")
    if total == 0:
        return EXIT_USAGE
    return code


def cmd_verify(args) -> int:
    source = args.input
    if source == "-":
        return _verify_lines(sys.stdin)
    try:
        with open(source) as fh:
            return _verify_lines(fh)
    except FileNotFoundError:
        # not a file: treat the argument as a single solution line
        return _verify_lines([source])
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def cmd_bench(args) -> int:
    if args.from_n > args.to_n:
        print("error: --from-n must not exceed --to-n", file=sys.stderr)
        return EXIT_USAGE
    if args.to_n >= LONG_RUN_N and not args.long_run:
        print(f"error: benching n>={LONG_RUN_N} needs --long-run", file=sys.stderr)
        return EXIT_USAGE
    config = _solver_config(args)
    schedule = _schedule_config(args)
    rows: list[RunRecord] = []
    if args.format == "text":
        print(f"{'n':>3} {'maxL':>6} {'encode':>8} {'clauses':>9} {'vars':>7} {'solve':>9} status")
    for n in range(args.from_n, args.to_n + 1):
        try:
            record, _, _ = run_schedule(n, config, schedule, jobs=args.jobs)
        except InvalidSolutionError as exc:
            print(f"error: invalid solution at n={n}: {exc}", file=sys.stderr)
            return EXIT_INVALID
        rows.append(record)
        if args.format == "records":
            print(json.dumps(record.as_dict()))
        else:
            print(f"{record.n:>3} {record.maxl:>6} {record.encode_seconds:>7.2f}s "
                  f"{record.num_clauses:>9} {record.num_vars:>7} "
                  f"{record.solve_seconds:>8.2f}s {record.status}")
            if record.solution_line:
                print(f"    {record.solution_line}")
    statuses = {r.status for r in rows}
    if ERROR in statuses:
        return EXIT_USAGE
    if TIMEOUT in statuses:
        return EXIT_TIMEOUT
    if UNSAT in statuses:
        return EXIT_UNSAT
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        solutions = brute_force_solve(args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for sol in solutions:
        print(format_solution_line(sol))
    return EXIT_OK if solutions else EXIT_UNSAT


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver-cmd", default=None,
                   help="external solver command with {cnf} placeholder "
                        "(default: $NFRAC_SOLVER_CMD, else a solver on PATH, else internal)")
    p.add_argument("--timeout", type=float, default=600.0,
                   help="seconds per (n, maxL) candidate (default 600)")
    p.add_argument("--seed", type=int, default=0, help="internal solver branching seed")
    p.add_argument("--jobs", type=int, default=1,
                   help="schedule candidates solved concurrently (default 1)")
    p.add_argument("--format", choices=("text", "records"), default="text",
                   help="human table or one JSON record per line")
    p.add_argument("--schedule-threshold", type=int, default=ScheduleConfig.large_n_threshold,
                   help="n at which the coarse 1000/+500 schedule kicks in")
    p.add_argument("--schedule-cap", type=int, default=ScheduleConfig.cap,
                   help="largest maxL the schedule will try")
    p.add_argument("--long-run", action="store_true",
                   help=f"allow solving n >= {LONG_RUN_N} (expected to take hours)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nfrac",
        description="SAT pipeline for the n-fractions puzzle: encode to DIMACS, "
                    "solve, decode, and verify with exact arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="write DIMACS CNF and variable map for one instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-l", type=int, required=True)
    p.add_argument("--out", required=True, help="DIMACS output path")
    p.add_argument("--map", required=True, help="variable map output path")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="solve one instance or search maxL by schedule")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-l", type=int, default=None)
    p.add_argument("--schedule", action="store_true", help="search maxL instead of fixing it")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check solution lines ('n L x1 d1 x2 d2 ...')")
    p.add_argument("input", help="a solution line, a file of lines, or '-' for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run the schedule for a range of n")
    p.add_argument("--from-n", type=int, required=True)
    p.add_argument("--to-n", type=int, required=True)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exhaustively enumerate all solutions (n <= 4)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
