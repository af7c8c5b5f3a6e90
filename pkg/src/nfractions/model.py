"""The LCM constraint model for the n-fractions puzzle.

For an instance (n, maxL) the builder emits four constraint groups in a
fixed order, so a given instance always compiles to the same CNF:

1. digit domains x_i, y_i, z_i in 1..9, divisors yz_i = 10*y_i + z_i in
   11..99 (x_i and yz_i channelled to binary), and the digit-occurrence
   counters s_j in 1..ceil(n/3);
2. symmetry breaking (y_i, z_i, x_i) <=_lex (y_{i+1}, z_{i+1}, x_{i+1})
   plus the redundant bound min yz <= sum x_i <= max yz;
3. per-fraction common-multiple candidates ell_i = yz_i * d_i, with the
   repeated-divisor shortcut: equal consecutive divisors share d,
   distinct ones force ell_{i+1} = ell_1;
4. the puzzle constraint sum_i x_i * d_i = ell_1.

The decoded common multiple L is ell_1; no separate L variable exists.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import ceil
from typing import IO, Mapping

from .cnf import Cnf, ConstructionError
from .encodings import (
    IntVar,
    binary_array_sum_eq,
    binary_eq_reif,
    binary_times,
    bool_array_or,
    bool_array_sum_eq,
    channel_int2binary,
    int_array_lin_eq,
    int_array_max,
    int_array_min,
    int_array_sum_eq,
    int_arrays_lex,
    int_eq_reif,
    int_leq,
    new_binary,
    new_int,
)
from .verify import Solution


class DecodeError(Exception):
    """A satisfying assignment decoded inconsistently (encoder bug)."""


@dataclass(frozen=True)
class PuzzleInstance:
    n: int
    maxl: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.maxl < 11:
            raise ValueError("maxL must be at least 11, the smallest divisor")


def counting_feasible(n: int) -> bool:
    """Nine digits must each occur at least once, so 3n >= 9 is required."""
    return 3 * n >= 9


# Solutions are known to exist up to n=44 and proven absent beyond;
# larger instances are allowed but get a warning from the CLI.
LARGEST_SOLVABLE_N = 44


@dataclass
class ModelVars:
    """Handles for every symbol of the model, in model order (1-based i)."""

    n: int
    maxl: int
    x: list[IntVar] = field(default_factory=list)
    y: list[IntVar] = field(default_factory=list)
    z: list[IntVar] = field(default_factory=list)
    yz: list[IntVar] = field(default_factory=list)
    dig_bool: list[list[int]] = field(default_factory=list)  # [3n][9]
    s: list[IntVar] = field(default_factory=list)            # [9]
    r: IntVar | None = None
    vmin: IntVar | None = None
    vmax: IntVar | None = None
    d: list[IntVar] = field(default_factory=list)
    ell: list[IntVar] = field(default_factory=list)
    t: list[IntVar] = field(default_factory=list)
    a: list[int] = field(default_factory=list)               # [n-1]
    b: list[int] = field(default_factory=list)
    c: list[int] = field(default_factory=list)


def build_model(instance: PuzzleInstance) -> tuple[Cnf, ModelVars]:
    """Compile the instance to CNF. The result is UNSAT for n < 3."""
    n, maxl = instance.n, instance.maxl
    f = Cnf()
    mv = ModelVars(n=n, maxl=maxl)
    cap = ceil(n / 3)
    d_ub = ceil(maxl / 11)

    # group 1: domains, channelling, divisor arithmetic, digit counting
    for i in range(n):
        mv.x.append(new_int(f, 1, 9))
        mv.y.append(new_int(f, 1, 9))
        mv.z.append(new_int(f, 1, 9))
        mv.yz.append(new_int(f, 11, 99))
        channel_int2binary(f, mv.x[i])
        channel_int2binary(f, mv.yz[i])
        int_array_lin_eq(f, [10, 1], [mv.y[i], mv.z[i]], mv.yz[i])
    digits = mv.x + mv.y + mv.z
    for dig in digits:
        row = []
        for j in range(1, 10):
            lit = f.new_var()
            int_eq_reif(f, dig, j, lit)
            row.append(lit)
        mv.dig_bool.append(row)
    for j in range(9):
        s_j = new_int(f, 1, cap)
        bool_array_sum_eq(f, [row[j] for row in mv.dig_bool], s_j)
        mv.s.append(s_j)

    # group 2: symmetry breaking and the redundant sum bound
    for i in range(n - 1):
        int_arrays_lex(
            f,
            [mv.y[i], mv.z[i], mv.x[i]],
            [mv.y[i + 1], mv.z[i + 1], mv.x[i + 1]],
        )
    mv.r = new_int(f, n, 9 * n)
    int_array_sum_eq(f, mv.x, mv.r)
    mv.vmin = new_int(f, 11, 99)
    int_array_min(f, mv.yz, mv.vmin)
    mv.vmax = new_int(f, 11, 99)
    int_array_max(f, mv.yz, mv.vmax)
    int_leq(f, mv.vmin, mv.r)
    int_leq(f, mv.r, mv.vmax)

    # group 3: common-multiple candidates with the repeated-divisor shortcut
    for i in range(n):
        mv.ell.append(new_binary(f, 1, maxl))
        mv.d.append(new_binary(f, 1, d_ub))
        binary_times(f, mv.yz[i], mv.d[i], mv.ell[i])
    for i in range(n - 1):
        a_i = f.new_var()
        binary_eq_reif(f, mv.yz[i], mv.yz[i + 1], a_i)
        b_i = f.new_var()
        binary_eq_reif(f, mv.d[i], mv.d[i + 1], b_i)
        c_i = f.new_var()
        binary_eq_reif(f, mv.ell[i + 1], mv.ell[0], c_i)
        bool_array_or(f, [-a_i, b_i])
        bool_array_or(f, [a_i, c_i])
        mv.a.append(a_i)
        mv.b.append(b_i)
        mv.c.append(c_i)

    # group 4: the puzzle constraint sum x_i * d_i = ell_1
    for i in range(n):
        mv.t.append(new_binary(f, 1, 9 * d_ub))
        binary_times(f, mv.x[i], mv.d[i], mv.t[i])
    binary_array_sum_eq(f, mv.t, mv.ell[0])

    return f, mv


def decode_solution(assignment: Mapping[int, bool], mv: ModelVars) -> Solution:
    """Read the digit triples and L out of a satisfying assignment.

    Channelled variables are decoded through both views; a mismatch
    means the encoding is broken and raises DecodeError.
    """
    triples = []
    for i in range(mv.n):
        x_u, x_b = mv.x[i].decode_order(assignment), mv.x[i].decode_bits(assignment)
        if x_u != x_b:
            raise DecodeError(f"x[{i + 1}] channel mismatch: unary {x_u}, binary {x_b}")
        yz_u, yz_b = mv.yz[i].decode_order(assignment), mv.yz[i].decode_bits(assignment)
        if yz_u != yz_b:
            raise DecodeError(f"yz[{i + 1}] channel mismatch: unary {yz_u}, binary {yz_b}")
        y_v = mv.y[i].decode_order(assignment)
        z_v = mv.z[i].decode_order(assignment)
        if 10 * y_v + z_v != yz_u:
            raise DecodeError(f"divisor {i + 1} decodes {yz_u}, digits give {10 * y_v + z_v}")
        triples.append((x_u, y_v, z_v))
    return Solution(mv.n, triples, common_multiple=mv.ell[0].decode_bits(assignment))


# ---------------------------------------------------------------------------
# maxL search schedule

@dataclass(frozen=True)
class ScheduleConfig:
    small_step: int = 100
    cap: int = 10000
    large_n_threshold: int = 15
    coarse_start: int = 1000
    coarse_step: int = 500
    refine_step: int = 100


def maxl_schedule(n: int, config: ScheduleConfig = ScheduleConfig()) -> list[int]:
    """First-pass maxL candidates, smallest first.

    Small n walks 100, 200, ... up to the cap. Large n (at or above the
    threshold) walks the coarse grid 1000, 1500, ...; a SAT hit there
    should be followed by refine_schedule().
    """
    if n < 3:
        raise ValueError("no instance with n < 3 has a schedule")
    if n < config.large_n_threshold:
        start, step = config.small_step, config.small_step
    else:
        start, step = config.coarse_start, config.coarse_step
    return list(range(start, config.cap + 1, step))


def refine_schedule(sat_maxl: int, config: ScheduleConfig = ScheduleConfig()) -> list[int]:
    """Second-pass candidates after a coarse hit at sat_maxl.

    Walks from just above the largest multiple of 1000 below the hit up
    to the hit itself, seeking the smallest workable bound.
    """
    floor = ((sat_maxl - 1) // 1000) * 1000
    return list(range(floor + config.refine_step, sat_maxl, config.refine_step))


# ---------------------------------------------------------------------------
# sidecar map: lets a separate process decode a solve of a written CNF

_UNARY_SYMBOLS = {"x": 1, "y": 1, "z": 1, "yz": 11, "s": 1, "r": None, "min": 11, "max": 11}


def _map_lines(mv: ModelVars) -> list[str]:
    lines = [f"n {mv.n}", f"maxl {mv.maxl}"]

    def arr(name, vars_, attr):
        for i, v in enumerate(vars_, start=1):
            lits = getattr(v, attr)
            lines.append(f"{name} {i} " + " ".join(str(l) for l in lits))

    arr("x", mv.x, "order")
    arr("y", mv.y, "order")
    arr("z", mv.z, "order")
    arr("yz", mv.yz, "order")
    arr("xbin", mv.x, "bits")
    arr("yzbin", mv.yz, "bits")
    for i, row in enumerate(mv.dig_bool, start=1):
        for j, lit in enumerate(row, start=1):
            lines.append(f"dig {i} {j} {lit}")
    arr("s", mv.s, "order")
    arr("r", [mv.r], "order")
    arr("min", [mv.vmin], "order")
    arr("max", [mv.vmax], "order")
    arr("d", mv.d, "bits")
    arr("ell", mv.ell, "bits")
    arr("t", mv.t, "bits")
    for name, lits in (("a", mv.a), ("b", mv.b), ("c", mv.c)):
        for i, lit in enumerate(lits, start=1):
            lines.append(f"{name} {i} {lit}")
    return lines


def write_varmap(mv: ModelVars, sink: IO[str]) -> None:
    for line in _map_lines(mv):
        sink.write(line + "\n")


def varmap_digest(mv: ModelVars) -> str:
    text = "\n".join(_map_lines(mv)) + "\n"
    return hashlib.sha256(text.encode("ascii")).hexdigest()


@dataclass
class VarMap:
    n: int
    maxl: int
    entries: dict[tuple[str, tuple[int, ...]], list[int]]

    def int_var(self, name: str, index: int) -> IntVar:
        if name in ("d", "ell", "t"):
            return IntVar(1, self._bin_ub(name), bits=self.entries[(name, (index,))])
        lb = _UNARY_SYMBOLS[name]
        if name == "r":
            lb = self.n
        lits = self.entries[(name, (index,))]
        return IntVar(lb, lb + len(lits), order=lits)

    def _bin_ub(self, name: str) -> int:
        return {"d": ceil(self.maxl / 11), "ell": self.maxl, "t": 9 * ceil(self.maxl / 11)}[name]


def read_varmap(source: IO[str]) -> VarMap:
    n = maxl = None
    entries: dict[tuple[str, tuple[int, ...]], list[int]] = {}
    for line in source:
        toks = line.split()
        if not toks:
            continue
        name = toks[0]
        if name == "n":
            n = int(toks[1])
        elif name == "maxl":
            maxl = int(toks[1])
        elif name == "dig":
            entries[(name, (int(toks[1]), int(toks[2])))] = [int(toks[3])]
        else:
            entries[(name, (int(toks[1]),))] = [int(t) for t in toks[2:]]
    if n is None or maxl is None:
        raise ValueError("sidecar map is missing the n/maxl header")
    return VarMap(n=n, maxl=maxl, entries=entries)


def decode_solution_from_map(assignment: Mapping[int, bool], varmap: VarMap) -> Solution:
    """decode_solution equivalent driven by a sidecar map file."""
    triples = []
    for i in range(1, varmap.n + 1):
        x = varmap.int_var("x", i)
        xbin = IntVar(x.lb, x.ub, bits=varmap.entries[("xbin", (i,))])
        if x.decode_order(assignment) != xbin.decode_bits(assignment):
            raise DecodeError(f"x[{i}] channel mismatch in mapped decode")
        yz = varmap.int_var("yz", i)
        yzbin = IntVar(yz.lb, yz.ub, bits=varmap.entries[("yzbin", (i,))])
        if yz.decode_order(assignment) != yzbin.decode_bits(assignment):
            raise DecodeError(f"yz[{i}] channel mismatch in mapped decode")
        y_v = varmap.int_var("y", i).decode_order(assignment)
        z_v = varmap.int_var("z", i).decode_order(assignment)
        if 10 * y_v + z_v != yz.decode_order(assignment):
            raise DecodeError(f"divisor {i} inconsistent in mapped decode")
        triples.append((x.decode_order(assignment), y_v, z_v))
    ell1 = varmap.int_var("ell", 1)
    return Solution(varmap.n, triples, common_multiple=ell1.decode_bits(assignment))
