"""Two-phase primal simplex over exact rationals.

Solves ``min c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x == b_eq`` and
``x >= 0``. Bland's rule picks both entering and leaving variables, so the
method terminates on degenerate problems.

The tableau is kept in integers: every row is an equation that may be
scaled by any positive constant, so each row is stored primitive (gcd 1)
and pivoting uses cross-multiplication. Signs and ratios, which are all
the pivot rules look at, are unaffected by the scaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = math.gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def _scaled(values: Sequence) -> list[int]:
    """Smallest positive integer multiple of a rational vector."""
    fr = [v if isinstance(v, Fraction) else Fraction(v) for v in values]
    den = math.lcm(*(v.denominator for v in fr)) if fr else 1
    return [v.numerator * (den // v.denominator) for v in fr]


class _Tableau:
    """Constraint rows plus objective rows, all ``[coeffs..., rhs]``.

    A constraint row reads ``sum a_k x_k = rhs``; the basic variable of row
    i has a positive coefficient and value ``rhs / a``. An objective row
    holds a positive multiple of ``[reduced costs..., -value]``.
    """

    def __init__(self, rows: list[list[int]], basis: list[int], objectives: list[list[int]]):
        self.rows = rows
        self.basis = basis
        self.objectives = objectives

    def _eliminate(self, row: list[int], prow: list[int], c: int, nz: list[int]) -> list[int]:
        f = row[c]
        if not f:
            return row
        a = prow[c]
        out = [v * a for v in row]
        for k in nz:
            out[k] -= f * prow[k]
        return _primitive(out)

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        if prow[c] < 0:
            prow = self.rows[r] = [-v for v in prow]
        nz = [k for k, v in enumerate(prow) if v]
        for i in range(len(self.rows)):
            if i != r:
                self.rows[i] = self._eliminate(self.rows[i], prow, c, nz)
        self.objectives = [self._eliminate(o, prow, c, nz) for o in self.objectives]
        self.basis[r] = c

    def run(self, obj: int, allowed: Sequence[int]) -> str:
        while True:
            red = self.objectives[obj]
            enter = next((k for k in allowed if red[k] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    brow = self.rows[best]
                    # compare rhs_i / a with rhs_best / a_best
                    lhs = row[-1] * brow[enter]
                    rhs = brow[-1] * a
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                        best = i
            if best is None:
                return UNBOUNDED
            self.pivot(best, enter)

    def solution(self, n: int) -> tuple[Fraction, ...]:
        x = [Fraction(0)] * n
        for row, b in zip(self.rows, self.basis):
            if b < n:
                x[b] = Fraction(row[-1], row[b])
        return tuple(x)


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Minimise ``c.x`` over the polyhedron; exact and deterministic."""
    return lexmin([c], A_ub, b_ub, A_eq, b_eq)


def lexmin(
    objectives: Sequence[Sequence],
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Lexicographic minimum: optimise each objective in turn over the
    optimal face of the ones before it. ``value`` is the first objective's.

    Later stages only pivot on columns whose reduced costs vanish in all
    earlier objectives, so the earlier optima are preserved.
    """
    if not objectives:
        raise ValueError("at least one objective is required")
    n = len(objectives[0])
    costs = [[Fraction(v) for v in c] for c in objectives]
    if any(len(c) != n for c in costs):
        raise ValueError("objectives differ in length")
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("right-hand side length mismatch")
    for row in list(A_ub) + list(A_eq):
        if len(row) != n:
            raise ValueError("constraint row length does not match the objective")
    n_slack = len(A_ub)
    m = n_slack + len(A_eq)
    width = n + n_slack + m
    rows: list[list[int]] = []
    basis: list[int] = []
    artificial: list[int] = []
    for i, (a, b) in enumerate(list(zip(A_ub, b_ub)) + list(zip(A_eq, b_eq))):
        vals = _scaled(list(a) + [b])
        sign = -1 if vals[-1] < 0 else 1
        row = [sign * v for v in vals[:n]] + [0] * (n_slack + m) + [sign * vals[-1]]
        if i < n_slack:
            row[n + i] = sign
        if i < n_slack and sign > 0:
            basis.append(n + i)
        else:
            # the artificial measures the scaled row's residual; any positive
            # multiple of an artificial serves equally well
            row[n + n_slack + i] = 1
            basis.append(n + n_slack + i)
            artificial.append(i)
        rows.append(row)

    # costs on the initial basis are zero, so reduced costs are c itself
    k_obj = len(costs)
    objs = [_primitive(_scaled(c) + [0] * (n_slack + m + 1)) for c in costs]
    tab = _Tableau(rows, basis, objs)
    real = range(n + n_slack)
    if artificial:
        # minimise the sum of artificials: reduced costs are -(sum of their rows)
        ph1 = [0] * (width + 1)
        for i in artificial:
            for k, v in enumerate(rows[i]):
                if v:
                    ph1[k] -= v
            ph1[n + n_slack + i] = 0
        tab.objectives.append(_primitive(ph1))
        tab.run(k_obj, real)
        if any(row[-1] != 0 for row, b in zip(tab.rows, tab.basis) if b >= n + n_slack):
            return LPResult(INFEASIBLE)
        tab.objectives.pop()
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= n + n_slack:
                col = next((k for k in real if tab.rows[i][k] != 0), None)
                if col is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1

    allowed = list(real)
    for k in range(k_obj):
        if tab.run(k, allowed) == UNBOUNDED:
            return LPResult(UNBOUNDED)
        red = tab.objectives[k]
        allowed = [c for c in allowed if red[c] == 0]
    x = tab.solution(n)
    value = sum((ci * xi for ci, xi in zip(costs[0], x)), Fraction(0))
    return LPResult(OPTIMAL, x, value)
