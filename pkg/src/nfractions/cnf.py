"""CNF container, DIMACS I/O, and SAT-competition output parsing.

Literals are DIMACS-style signed integers: variable k is the literal k,
its negation is -k. Variable indices start at 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping


class ConstructionError(Exception):
    """Raised when a formula or encoder is used inconsistently."""


@dataclass
class Cnf:
    """A CNF formula under construction.

    Mutated single-threaded while encoders run; treat as immutable
    afterwards. Variable numbering is the allocation order, so a fixed
    construction sequence yields identical formulas.
    """

    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def new_vars(self, count: int) -> list[int]:
        return [self.new_var() for _ in range(count)]

    def add_clause(self, literals: Iterable[int]) -> None:
        """Append a clause, dropping duplicate literals and tautologies.

        An empty clause is accepted and makes the formula unsatisfiable;
        encoders only produce one when a constraint is infeasible by
        construction (e.g. an empty domain).
        """
        seen: set[int] = set()
        clause: list[int] = []
        for lit in literals:
            if lit == 0:
                raise ConstructionError("literal 0 is reserved in DIMACS")
            if abs(lit) > self.num_vars:
                raise ConstructionError(
                    f"literal {lit} references unallocated variable (have {self.num_vars})"
                )
            if -lit in seen:
                return  # tautology, clause is always true
            if lit not in seen:
                seen.add(lit)
                clause.append(lit)
        self.clauses.append(clause)

    def add_unit(self, lit: int) -> None:
        self.add_clause([lit])


def write_dimacs(formula: Cnf, sink: IO[str], comments: Iterable[str] = ()) -> None:
    """Write the formula in DIMACS CNF format.

    Comment lines (prefixed "c ") come first, then the "p cnf" header,
    then one clause per line terminated by " 0". Output is byte-stable
    for a fixed formula and comment sequence.
    """
    for comment in comments:
        sink.write(f"c {comment}\n")
    sink.write(f"p cnf {formula.num_vars} {len(formula.clauses)}\n")
    for clause in formula.clauses:
        sink.write(" ".join(str(lit) for lit in clause) + " 0\n")


def parse_dimacs(source: IO[str]) -> Cnf:
    """Read a DIMACS CNF file back into a Cnf (used for round-trip checks)."""
    num_vars = 0
    clauses: list[list[int]] = []
    pending: list[int] = []
    saw_header = False
    for line in source:
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"malformed DIMACS header: {line!r}")
            num_vars = int(parts[2])
            saw_header = True
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(pending)
                pending = []
            else:
                pending.append(lit)
    if not saw_header:
        raise ValueError("missing DIMACS header")
    if pending:
        clauses.append(pending)
    formula = Cnf(num_vars=num_vars)
    formula.clauses = clauses
    return formula


# Solve statuses shared by the output parser and the solver drivers.
SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"
TIMEOUT = "TIMEOUT"
ERROR = "ERROR"


@dataclass
class ParsedOutput:
    """Result of parsing SAT-competition solver output."""

    status: str  # SAT | UNSAT | UNKNOWN
    assignment: dict[int, bool] | None = None
    diagnostic: str = ""


def parse_solver_output(text: str) -> ParsedOutput:
    """Parse SAT-competition conventions: "s" status line, "v" value lines.

    On SAT, the assignment covers every variable reported on "v" lines;
    variables a solver leaves out are read as false by the decoders.
    Missing or malformed status lines yield UNKNOWN with a diagnostic.
    """
    status: str | None = None
    values: dict[int, bool] = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s ") or line == "s":
            verdict = line[1:].strip()
            if verdict == "SATISFIABLE":
                status = SAT
            elif verdict == "UNSATISFIABLE":
                status = UNSAT
            elif verdict == "UNKNOWN":
                return ParsedOutput(UNKNOWN, diagnostic="solver reported UNKNOWN")
            else:
                return ParsedOutput(UNKNOWN, diagnostic=f"unrecognized status line: {line!r}")
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                lit = int(tok)
                if lit == 0:
                    continue
                values[abs(lit)] = lit > 0
    if status is None:
        return ParsedOutput(UNKNOWN, diagnostic="no status line in solver output")
    if status == SAT:
        return ParsedOutput(SAT, assignment=values)
    return ParsedOutput(UNSAT)


def check_assignment(formula: Cnf, assignment: Mapping[int, bool]) -> bool:
    """True iff every clause has a literal satisfied by the assignment.

    Unreported variables count as false, matching parse_solver_output.
    """
    for clause in formula.clauses:
        if not any(assignment.get(abs(lit), False) == (lit > 0) for lit in clause):
            return False
    return True
