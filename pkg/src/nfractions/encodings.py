"""Finite-domain integer encodings over CNF.

Two representations:

* order (unary): variable x with bounds lb..ub gets literals o_v for
  v in lb+1..ub, where o_v means x >= v, chained so o_{v+1} -> o_v.
  The decoded value is lb + (number of true order literals).
* binary: an unsigned bit vector, LSB first, wide enough for ub, with
  clauses enforcing lb <= value <= ub.

Encoders take literal-or-constant operands internally: Python True/False
stand for constant literals and are folded away while emitting clauses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .cnf import Cnf, ConstructionError

LitOrConst = "int | bool"


@dataclass
class IntVar:
    """An integer variable with an order view, a binary view, or both.

    If both views are present, channelling clauses make them decode to
    the same value in every model.
    """

    lb: int
    ub: int
    order: list[int] | None = None  # order[k] is the literal (value >= lb+1+k)
    bits: list[int] | None = None   # LSB first

    def decode(self, assignment: Mapping[int, bool]) -> int:
        if self.order is not None:
            return self.decode_order(assignment)
        return self.decode_bits(assignment)

    def decode_order(self, assignment: Mapping[int, bool]) -> int:
        if self.order is None:
            raise ConstructionError("variable has no order view")
        return self.lb + sum(1 for v in self.order if assignment.get(v, False))

    def decode_bits(self, assignment: Mapping[int, bool]) -> int:
        if self.bits is None:
            raise ConstructionError("variable has no binary view")
        return sum(1 << k for k, v in enumerate(self.bits) if assignment.get(v, False))


def _neg(lit):
    if lit is True:
        return False
    if lit is False:
        return True
    return -lit


def _emit(formula: Cnf, lits) -> None:
    """Add a clause, folding constants: True satisfies it, False drops out."""
    clause = []
    for lit in lits:
        if lit is True:
            return
        if lit is False:
            continue
        clause.append(lit)
    formula.add_clause(clause)


def ge(x: IntVar, v: int):
    """The literal (x >= v); True/False when the bound decides it."""
    if v <= x.lb:
        return True
    if v > x.ub:
        return False
    assert x.order is not None, "ge() needs an order view"
    return x.order[v - x.lb - 1]


def new_int(formula: Cnf, lb: int, ub: int) -> IntVar:
    """Allocate an order-encoded integer in lb..ub."""
    if lb > ub:
        raise ConstructionError(f"empty domain {lb}..{ub}")
    order = formula.new_vars(ub - lb)
    for k in range(1, len(order)):
        formula.add_clause([-order[k], order[k - 1]])  # x>=v+1 -> x>=v
    return IntVar(lb, ub, order=order)


def _bit_width(ub: int) -> int:
    return max(ub, 0).bit_length()


def _emit_bit_bounds(formula: Cnf, bits: Sequence[int], lb: int, ub: int) -> None:
    # value <= ub: rule out "matches ub above k, exceeds at k" for every 0-bit k
    w = len(bits)
    for k in range(w):
        if not (ub >> k) & 1:
            clause = [-bits[k]]
            clause += [-bits[j] for j in range(k + 1, w) if (ub >> j) & 1]
            formula.add_clause(clause)
    # value >= lb: dual on 1-bits of lb
    for k in range(w):
        if (lb >> k) & 1:
            clause = [bits[k]]
            clause += [bits[j] for j in range(k + 1, w) if not (lb >> j) & 1]
            formula.add_clause(clause)


def new_binary(formula: Cnf, lb: int, ub: int) -> IntVar:
    """Allocate a binary-encoded integer in lb..ub (lb >= 0)."""
    if lb > ub:
        raise ConstructionError(f"empty domain {lb}..{ub}")
    if lb < 0:
        raise ConstructionError("binary representation is unsigned")
    bits = formula.new_vars(_bit_width(ub))
    _emit_bit_bounds(formula, bits, lb, ub)
    return IntVar(lb, ub, bits=bits)


def channel_int2binary(formula: Cnf, x: IntVar) -> None:
    """Add a binary view to an order-encoded variable.

    Every value v in the domain implies its bit pattern, so the two
    views decode equal in every model. Domains here are small (<= 99),
    making the per-value ladder cheap.
    """
    if x.order is None:
        raise ConstructionError("channelling needs an order view")
    if x.bits is not None:
        raise ConstructionError("variable already has a binary view")
    bits = formula.new_vars(_bit_width(x.ub))
    _emit_bit_bounds(formula, bits, x.lb, x.ub)
    for v in range(x.lb, x.ub + 1):
        guard = [_neg(ge(x, v)), ge(x, v + 1)]  # clause context: unless x == v
        for k, bit in enumerate(bits):
            _emit(formula, guard + [bit if (v >> k) & 1 else -bit])
    x.bits = bits


def int_eq_reif(formula: Cnf, x: IntVar, c: int, b: int) -> None:
    """b <-> (x = c) for a constant c; b is forced false when c is out of range."""
    if c < x.lb or c > x.ub:
        formula.add_unit(-b)
        return
    at_least = ge(x, c)
    above = ge(x, c + 1)
    _emit(formula, [-b, at_least])
    _emit(formula, [-b, _neg(above)])
    _emit(formula, [_neg(at_least), above, b])


def int_array_lin_eq(formula: Cnf, coeffs: Sequence[int], xs: Sequence[IntVar], result: IntVar) -> None:
    """coeffs . xs = result over order views, for two positive-coefficient terms.

    Each value pair of the inputs forces the exact result value; pairs
    whose combination falls outside the result domain are forbidden.
    """
    if len(coeffs) != 2 or len(xs) != 2:
        raise ConstructionError("only two-term linear equations are supported")
    if any(c <= 0 for c in coeffs):
        raise ConstructionError("coefficients must be positive")
    (ca, cb), (a, b) = coeffs, xs
    for va in range(a.lb, a.ub + 1):
        for vb in range(b.lb, b.ub + 1):
            target = ca * va + cb * vb
            unless = [_neg(ge(a, va)), ge(a, va + 1), _neg(ge(b, vb)), ge(b, vb + 1)]
            _emit(formula, unless + [ge(result, target)])
            _emit(formula, unless + [_neg(ge(result, target + 1))])


def _int_plus(formula: Cnf, a: IntVar, b: IntVar, ub_cap: int | None = None) -> IntVar:
    """Fresh c with c = a + b; sums above ub_cap are excluded, not clamped."""
    lb = a.lb + b.lb
    ub = a.ub + b.ub if ub_cap is None else min(a.ub + b.ub, ub_cap)
    if ub < lb:
        # the cap is unreachable: no model may use this sum
        formula.add_clause([])
        return IntVar(lb, lb, order=[])
    c = new_int(formula, lb, ub)
    for i in range(a.lb, a.ub + 1):
        for j in range(b.lb, b.ub + 1):
            # a>=i and b>=j  ->  c >= i+j
            _emit(formula, [_neg(ge(a, i)), _neg(ge(b, j)), ge(c, i + j)])
            # a<=i and b<=j  ->  c <= i+j
            _emit(formula, [ge(a, i + 1), ge(b, j + 1), _neg(ge(c, i + j + 1))])
    return c


def _int_eq(formula: Cnf, a: IntVar, b: IntVar) -> None:
    """Tie two order views together: a >= v <-> b >= v for every v."""
    for v in range(min(a.lb, b.lb) + 1, max(a.ub, b.ub) + 1):
        _emit(formula, [_neg(ge(a, v)), ge(b, v)])
        _emit(formula, [_neg(ge(b, v)), ge(a, v)])


def int_array_sum_eq(formula: Cnf, xs: Sequence[IntVar], r: IntVar) -> None:
    """Sum of order-encoded variables equals r, via a balanced tree of adders."""
    if not xs:
        _int_eq(formula, IntVar(0, 0, order=[]), r)
        return
    if sum(x.lb for x in xs) > r.ub or sum(x.ub for x in xs) < r.lb:
        formula.add_clause([])  # infeasible by bounds alone
        return
    layer = list(xs)
    while len(layer) > 1:
        nxt = []
        for i in range(0, len(layer) - 1, 2):
            nxt.append(_int_plus(formula, layer[i], layer[i + 1], ub_cap=r.ub))
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    _int_eq(formula, layer[0], r)


def bool_array_sum_eq(formula: Cnf, bits: Sequence[int], s: IntVar) -> None:
    """Number of true literals in bits equals s (sequential unary counter)."""
    as_ints = [IntVar(0, 1, order=[b]) for b in bits]
    if not as_ints:
        _int_eq(formula, IntVar(0, 0, order=[]), s)
        return
    partial = as_ints[0]
    for nxt in as_ints[1:]:
        partial = _int_plus(formula, partial, nxt, ub_cap=s.ub)
    _int_eq(formula, partial, s)


def int_leq(formula: Cnf, a: IntVar, b: IntVar) -> None:
    """a <= b over order views."""
    for v in range(min(a.lb, b.lb) + 1, a.ub + 1):
        _emit(formula, [_neg(ge(a, v)), ge(b, v)])


def int_arrays_lex(formula: Cnf, xs: Sequence[IntVar], ys: Sequence[IntVar]) -> None:
    """xs <=_lex ys (non-strict) over order views.

    Auxiliary literals are half-reified: strict_i implies xs[i] < ys[i]
    and equal_i implies xs[i] = ys[i]; the chain clause at position i
    demands one of them while all earlier positions are equal.
    """
    if len(xs) != len(ys):
        raise ConstructionError("lex arrays must have equal length")
    if not xs:
        return
    prefix_equal: list[int] = []
    for a, b in zip(xs, ys):
        strict = formula.new_var()
        equal = formula.new_var()
        for v in range(a.lb, a.ub + 1):
            _emit(formula, [-strict, _neg(ge(a, v)), ge(b, v + 1)])
        for v in range(min(a.lb, b.lb) + 1, max(a.ub, b.ub) + 1):
            _emit(formula, [-equal, _neg(ge(a, v)), ge(b, v)])
            _emit(formula, [-equal, _neg(ge(b, v)), ge(a, v)])
        formula.add_clause([-e for e in prefix_equal] + [strict, equal])
        prefix_equal.append(equal)


def int_array_min(formula: Cnf, xs: Sequence[IntVar], m: IntVar) -> None:
    """m = min(xs) over order views."""
    if not xs:
        raise ConstructionError("min of an empty array")
    for x in xs:
        int_leq(formula, m, x)
    lo = min([m.lb] + [x.lb for x in xs])
    for c in range(lo + 1, m.ub + 2):
        # all xs >= c forces m >= c (and forbids c beyond m's range)
        _emit(formula, [_neg(ge(x, c)) for x in xs] + [ge(m, c)])


def int_array_max(formula: Cnf, xs: Sequence[IntVar], m: IntVar) -> None:
    """m = max(xs) over order views."""
    if not xs:
        raise ConstructionError("max of an empty array")
    for x in xs:
        int_leq(formula, x, m)
    lo = min([m.lb] + [x.lb for x in xs])
    for c in range(lo + 1, m.ub + 1):
        # m >= c demands a witness x >= c
        _emit(formula, [_neg(ge(m, c))] + [ge(x, c) for x in xs])


def bool_array_or(formula: Cnf, lits: Sequence[int]) -> None:
    """Add the single clause (lits[0] or ... or lits[-1])."""
    if not lits:
        raise ConstructionError("empty disjunction is unsatisfiable by definition")
    formula.add_clause(list(lits))


# ---------------------------------------------------------------------------
# binary arithmetic

def _and_gate(formula: Cnf, x: int, y: int) -> int:
    z = formula.new_var()
    formula.add_clause([-z, x])
    formula.add_clause([-z, y])
    formula.add_clause([z, -x, -y])
    return z


def _half_adder(formula: Cnf, x: int, y: int) -> tuple[int, int]:
    s = formula.new_var()
    formula.add_clause([-s, x, y])
    formula.add_clause([-s, -x, -y])
    formula.add_clause([s, -x, y])
    formula.add_clause([s, x, -y])
    return s, _and_gate(formula, x, y)


def _full_adder(formula: Cnf, x: int, y: int, z: int) -> tuple[int, int]:
    s = formula.new_var()
    for cl in ([-s, x, y, z], [-s, -x, -y, z], [-s, -x, y, -z], [-s, x, -y, -z],
               [s, -x, -y, -z], [s, x, y, -z], [s, x, -y, z], [s, -x, y, z]):
        formula.add_clause(cl)
    carry = formula.new_var()
    for cl in ([carry, -x, -y], [carry, -x, -z], [carry, -y, -z],
               [-carry, x, y], [-carry, x, z], [-carry, y, z]):
        formula.add_clause(cl)
    return s, carry


def _add3(formula: Cnf, x, y, z):
    """Sum three bit operands (literal or None=0) to (sum, carry)."""
    present = [lit for lit in (x, y, z) if lit is not None]
    if not present:
        return None, None
    if len(present) == 1:
        return present[0], None
    if len(present) == 2:
        return _half_adder(formula, present[0], present[1])
    return _full_adder(formula, present[0], present[1], present[2])


def _ripple_add(formula: Cnf, xs, ys):
    """Add two bit vectors (None entries are constant 0); never truncates."""
    out = []
    carry = None
    for k in range(max(len(xs), len(ys))):
        x = xs[k] if k < len(xs) else None
        y = ys[k] if k < len(ys) else None
        s, carry = _add3(formula, x, y, carry)
        out.append(s)
    if carry is not None:
        out.append(carry)
    return out


def _tie_bits(formula: Cnf, produced, target: IntVar) -> None:
    """Equate a produced bit vector with target's bits; excess bits must be 0."""
    assert target.bits is not None
    width = len(target.bits)
    for k in range(max(len(produced), width)):
        p = produced[k] if k < len(produced) else None
        if k < width:
            t = target.bits[k]
            if p is None:
                formula.add_clause([-t])
            else:
                formula.add_clause([-t, p])
                formula.add_clause([t, -p])
        elif p is not None:
            formula.add_clause([-p])  # overflow beyond target width is forbidden


def binary_times(formula: Cnf, a: IntVar, b: IntVar, c: IntVar) -> None:
    """c = a * b over binary views, by partial products and carry-save columns.

    Any product that does not fit c's width or bounds is excluded by
    clauses; nothing wraps around.
    """
    for v in (a, b, c):
        if v.bits is None:
            raise ConstructionError("binary_times needs binary views")
    wa, wb = len(a.bits), len(b.bits)
    cols: list[list[int]] = [[] for _ in range(max(wa + wb, 1))]
    for i in range(wa):
        for j in range(wb):
            cols[i + j].append(_and_gate(formula, a.bits[i], b.bits[j]))
    k = 0
    while k < len(cols):
        col = cols[k]
        while len(col) > 1:
            take = col[:3]
            del col[:3]
            s, carry = _add3(formula, *(take + [None] * (3 - len(take))))
            col.append(s)
            if carry is not None:
                if k + 1 == len(cols):
                    cols.append([])
                cols[k + 1].append(carry)
        k += 1
    _tie_bits(formula, [col[0] if col else None for col in cols], c)


def binary_eq_reif(formula: Cnf, a: IntVar, b: IntVar, r: int) -> None:
    """r <-> (a = b) over binary views; the shorter vector is zero-padded."""
    if a.bits is None or b.bits is None:
        raise ConstructionError("binary_eq_reif needs binary views")
    diffs = []
    for k in range(max(len(a.bits), len(b.bits))):
        x = a.bits[k] if k < len(a.bits) else None
        y = b.bits[k] if k < len(b.bits) else None
        if x is None and y is None:
            continue
        if x is None or y is None:
            lone = x if y is None else y
            formula.add_clause([-r, -lone])
            diffs.append(lone)
            continue
        formula.add_clause([-r, -x, y])
        formula.add_clause([-r, x, -y])
        d = formula.new_var()  # d <-> x xor y
        for cl in ([-d, x, y], [-d, -x, -y], [d, -x, y], [d, x, -y]):
            formula.add_clause(cl)
        diffs.append(d)
    formula.add_clause([r] + [d for d in diffs])


def binary_array_sum_eq(formula: Cnf, xs: Sequence[IntVar], total: IntVar) -> None:
    """Sum of binary views equals total, via a balanced adder tree.

    Sums wider than total are excluded by the final tie; no wraparound.
    """
    if total.bits is None:
        raise ConstructionError("binary_array_sum_eq needs binary views")
    if not xs:
        _tie_bits(formula, [], total)
        return
    vectors = []
    for x in xs:
        if x.bits is None:
            raise ConstructionError("binary_array_sum_eq needs binary views")
        vectors.append(list(x.bits))
    while len(vectors) > 1:
        nxt = []
        for i in range(0, len(vectors) - 1, 2):
            nxt.append(_ripple_add(formula, vectors[i], vectors[i + 1]))
        if len(vectors) % 2:
            nxt.append(vectors[-1])
        vectors = nxt
    _tie_bits(formula, vectors[0], total)


def force_value(formula: Cnf, x: IntVar, value: int) -> None:
    """Pin a variable to a value with unit clauses on all of its views."""
    if not x.lb <= value <= x.ub:
        raise ConstructionError(f"value {value} outside domain {x.lb}..{x.ub}")
    if x.order is not None:
        for k, lit in enumerate(x.order):
            formula.add_unit(lit if x.lb + 1 + k <= value else -lit)
    if x.bits is not None:
        for k, lit in enumerate(x.bits):
            formula.add_unit(lit if (value >> k) & 1 else -lit)
