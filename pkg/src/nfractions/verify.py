"""Exact-arithmetic validation of n-fractions solutions.

A solution to the puzzle is an ordered list of digit triples
(x_i, y_i, z_i), all digits in 1..9, such that

    sum_i  x_i / (10*y_i + z_i)  =  1

and every digit 1..9 occurs between 1 and ceil(n/3) times across all
3n positions. All checks here use exact rational or big-integer
arithmetic: float rounding is precisely the failure mode this module
exists to rule out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Triple = tuple[int, int, int]


@dataclass
class Solution:
    """Digit triples plus the common multiple reported by the solver, if any."""

    n: int
    triples: list[Triple]
    common_multiple: int | None = None

    def divisors(self) -> list[int]:
        return [10 * y + z for _, y, z in self.triples]


@dataclass
class VerifyReport:
    sum_is_one: bool
    digit_counts: dict[int, int]
    counts_ok: bool
    lex_sorted: bool
    lcm: int
    multiple_consistent: bool  # reported common multiple is a multiple of lcm
    redundant_bound_ok: bool   # min divisor <= sum of numerators <= max divisor

    @property
    def all_ok(self) -> bool:
        return (self.sum_is_one and self.counts_ok and self.lex_sorted
                and self.multiple_consistent and self.redundant_bound_ok)

    def failures(self) -> list[str]:
        out = []
        if not self.sum_is_one:
            out.append("sum of fractions is not exactly 1")
        if not self.counts_ok:
            out.append("digit occurrence counts outside [1, ceil(n/3)]")
        if not self.lex_sorted:
            out.append("triples not sorted by (y, z, x)")
        if not self.multiple_consistent:
            out.append("reported common multiple is not divisible by the divisor lcm")
        if not self.redundant_bound_ok:
            out.append("numerator sum outside [min divisor, max divisor]")
        return out


def count_cap(n: int) -> int:
    """Maximum allowed occurrences of any one digit."""
    return math.ceil(n / 3)


def _check_structure(sol: Solution) -> None:
    if len(sol.triples) != sol.n:
        raise ValueError(f"expected {sol.n} triples, got {len(sol.triples)}")
    for t in sol.triples:
        if len(t) != 3 or any(not 1 <= v <= 9 for v in t):
            raise ValueError(f"digits must be in 1..9, got {t}")


def lcm_of_divisors(sol: Solution) -> int:
    return math.lcm(*sol.divisors()) if sol.triples else 1


def verify_solution(sol: Solution) -> VerifyReport:
    """Full report on one solution; raises ValueError on malformed input."""
    _check_structure(sol)
    total = sum(Fraction(x, 10 * y + z) for x, y, z in sol.triples)
    counts = {j: 0 for j in range(1, 10)}
    for t in sol.triples:
        for v in t:
            counts[v] += 1
    cap = count_cap(sol.n)
    divisors = sol.divisors()
    keys = [(y, z, x) for x, y, z in sol.triples]
    the_lcm = lcm_of_divisors(sol)
    if sol.common_multiple is None:
        multiple_consistent = True
    else:
        multiple_consistent = sol.common_multiple % the_lcm == 0
    numerator_sum = sum(x for x, _, _ in sol.triples)
    return VerifyReport(
        sum_is_one=total == 1,
        digit_counts=counts,
        counts_ok=all(1 <= counts[j] <= cap for j in range(1, 10)),
        lex_sorted=keys == sorted(keys),
        lcm=the_lcm,
        multiple_consistent=multiple_consistent,
        redundant_bound_ok=min(divisors) <= numerator_sum <= max(divisors),
    )


def product_model_check(sol: Solution) -> bool:
    """Check the puzzle equation multiplied through by all divisors.

    sum_i (x_i * prod_{k != i} D_k) = prod_k D_k, evaluated with Python
    big integers. Must agree with verify_solution().sum_is_one on every
    input; the products themselves outgrow 32-bit integers by n=6.
    """
    _check_structure(sol)
    divisors = sol.divisors()
    rhs = math.prod(divisors)
    lhs = sum(x * (rhs // d) for (x, _, _), d in zip(sol.triples, divisors))
    return lhs == rhs


def product_model_rhs(sol: Solution) -> int:
    """The right-hand-side product of the multiplied-through equation."""
    return math.prod(sol.divisors())


def canonicalize(sol: Solution) -> Solution:
    """Stable-sort triples by (y, z, x), the order the lex constraint fixes."""
    ordered = sorted(sol.triples, key=lambda t: (t[1], t[2], t[0]))
    return Solution(sol.n, ordered, sol.common_multiple)


def brute_force_solve(n: int) -> list[Solution]:
    """All canonical solutions for tiny n, by exhaustive search.

    Enumerates nondecreasing (by (y, z, x)) sequences of triples under
    the digit-count caps, pruning on exact partial sums; the last triple
    is resolved by lookup on the exact remaining fraction. Deterministic
    output order.
    """
    if n > 4:
        raise ValueError("brute force is only supported for n <= 4")
    if n < 1:
        raise ValueError("n must be positive")
    cap = count_cap(n)
    if 3 * n < 9:  # fewer positions than digits that must each appear
        return []

    triples = sorted(
        ((x, y, z) for y in range(1, 10) for z in range(1, 10) for x in range(1, 10)),
        key=lambda t: (t[1], t[2], t[0]),
    )
    # exact arithmetic over a common denominator keeps the hot loop on ints
    scale = math.lcm(*range(11, 100))
    values = [x * (scale // (10 * y + z)) for x, y, z in triples]
    # positions of each exact value, for resolving the final triple
    by_value: dict[int, list[int]] = {}
    for i, v in enumerate(values):
        by_value.setdefault(v, []).append(i)
    suffix_max = [0] * (len(triples) + 1)
    for i in range(len(triples) - 1, -1, -1):
        suffix_max[i] = max(values[i], suffix_max[i + 1])

    counts = [0] * 10
    chosen: list[int] = []
    found: list[Solution] = []

    def usable(idx: int) -> bool:
        x, y, z = triples[idx]
        counts[x] += 1
        counts[y] += 1
        counts[z] += 1
        ok = counts[x] <= cap and counts[y] <= cap and counts[z] <= cap
        if not ok:
            counts[x] -= 1
            counts[y] -= 1
            counts[z] -= 1
        return ok

    def unuse(idx: int) -> None:
        x, y, z = triples[idx]
        counts[x] -= 1
        counts[y] -= 1
        counts[z] -= 1

    def extend(start: int, remaining: int, total: int) -> None:
        if remaining == 1:
            need = scale - total
            for idx in by_value.get(need, ()):
                if idx < start:
                    continue
                if usable(idx):
                    if all(counts[j] >= 1 for j in range(1, 10)):
                        picked = [triples[i] for i in chosen] + [triples[idx]]
                        sol = Solution(n, picked)
                        sol.common_multiple = lcm_of_divisors(sol)
                        found.append(sol)
                    unuse(idx)
            return
        # digits still missing entirely must fit in the remaining slots
        missing = sum(1 for j in range(1, 10) if counts[j] == 0)
        if missing > 3 * remaining:
            return
        for idx in range(start, len(triples)):
            rest = total + values[idx]
            if rest + (remaining - 1) * suffix_max[idx] < scale:
                # values from here on are not ordered by magnitude, but
                # suffix_max bounds everything the nondecreasing-(y,z,x)
                # constraint still allows
                continue
            if rest >= scale:
                continue
            if usable(idx):
                chosen.append(idx)
                extend(idx, remaining - 1, rest)
                chosen.pop()
                unuse(idx)

    extend(0, n, 0)
    return found


# ---------------------------------------------------------------------------
# solution line format: "n L x1 y1z1 x2 y2z2 ...", divisors as two digits

def format_solution_line(sol: Solution) -> str:
    parts = [str(sol.n), str(sol.common_multiple if sol.common_multiple is not None else lcm_of_divisors(sol))]
    for x, y, z in sol.triples:
        parts.append(str(x))
        parts.append(f"{10 * y + z}")
    return " ".join(parts)


def parse_solution_line(line: str) -> Solution:
    toks = line.split()
    if len(toks) < 2:
        raise ValueError(f"malformed solution line: {line!r}")
    try:
        nums = [int(t) for t in toks]
    except ValueError as exc:
        raise ValueError(f"malformed solution line: {line!r}") from exc
    n, multiple, rest = nums[0], nums[1], nums[2:]
    if len(rest) != 2 * n:
        raise ValueError(f"expected {2 * n} numbers after 'n L', got {len(rest)}")
    triples = []
    for i in range(n):
        x, divisor = rest[2 * i], rest[2 * i + 1]
        y, z = divmod(divisor, 10)
        triples.append((x, y, z))
    return Solution(n, triples, multiple)
