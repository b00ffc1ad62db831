"""Exact membership and optimisation over the two rate regions.

``GENERAL`` is the region where only the message must be decoded;
``KEY_RECOVERED`` additionally requires the key to be decodable, which pins
the key rate to ``sum(r) - R_M``. Both are polyhedra in the per-channel
rates r_1..r_h once the tuple is fixed, so membership is an LP feasibility
question answered by :func:`wiretap2.lp.linprog`.

Infeasibility is reported with Farkas multipliers: a nonnegative
combination of the listed constraints (equalities may take either sign)
whose left-hand sides cancel and whose right-hand side is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp
from .model import (
    ProblemInstance,
    RateAllocation,
    RateTuple,
    format_rational,
    to_rational,
)

GENERAL = "general"
KEY_RECOVERED = "key-recovered"
VARIANTS = (GENERAL, KEY_RECOVERED)

ZERO = Fraction(0)


class DimensionError(ValueError):
    pass


class _Infeasible(Exception):
    pass


class InfeasibleError(Exception):
    def __init__(self, certificate: Certificate):
        super().__init__(f"infeasible: {certificate.combined}")
        self.certificate = certificate


@dataclass(frozen=True)
class Constraint:
    """``coeffs . r  (<= | ==)  rhs`` with a symbolic description."""

    name: str
    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    sense: str
    text: str

    def holds(self, r: Sequence[Fraction]) -> bool:
        lhs = sum((a * x for a, x in zip(self.coeffs, r)), ZERO)
        return lhs == self.rhs if self.sense == "==" else lhs <= self.rhs

    def numeric(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs, start=1):
            if not a:
                continue
            mag = "" if abs(a) == 1 else f"{format_rational(abs(a))}*"
            sign = "-" if a < 0 else "+"
            terms.append((sign, f"{mag}r_{i}"))
        if not terms:
            lhs = "0"
        else:
            lhs = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            for sign, t in terms[1:]:
                lhs += f" {sign} {t}"
        op = "==" if self.sense == "==" else "<="
        return f"{lhs} {op} {format_rational(self.rhs)}"


@dataclass(frozen=True)
class Certificate:
    """Farkas multipliers proving that no allocation exists."""

    multipliers: tuple[tuple[Fraction, Constraint], ...]
    combined_rhs: Fraction

    @property
    def combined(self) -> str:
        return f"0 <= {format_rational(self.combined_rhs)}"

    def verify(self, h: int) -> bool:
        lhs = [ZERO] * h
        rhs = ZERO
        for y, con in self.multipliers:
            if con.sense != "==" and y < 0:
                return False
            for i, a in enumerate(con.coeffs):
                lhs[i] += y * a
            rhs += y * con.rhs
        return all(v == 0 for v in lhs) and rhs < 0 and rhs == self.combined_rhs

    def to_dict(self) -> dict:
        return {
            "combined": self.combined,
            "multipliers": [
                {
                    "multiplier": format_rational(y),
                    "constraint": con.name,
                    "symbolic": con.text,
                    "numeric": con.numeric(),
                }
                for y, con in self.multipliers
            ],
        }


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    variant: str
    witness: RateAllocation | None = None
    certificate: Certificate | None = None

    def to_dict(self) -> dict:
        out: dict = {"feasible": self.feasible, "variant": self.variant}
        if self.witness is not None:
            out["witness"] = self.witness.to_list()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


@dataclass(frozen=True)
class RegionQuery:
    instance: ProblemInstance
    tuple: RateTuple
    variant: str = GENERAL


def _sum_text(idx: Sequence[int]) -> str:
    return " + ".join(f"r_{i}" for i in idx) if idx else "0"


def rate_constraints(
    inst: ProblemInstance,
    R_M: Fraction,
    equivocations: Sequence[Fraction],
    R_K: Fraction | None = None,
    variant: str = GENERAL,
) -> tuple[list[Constraint], list[Constraint]]:
    """Return ``(rate_only, allocation)`` constraint lists.

    ``rate_only`` rows involve no r variable and are checked up front.
    With ``R_K=None`` the key constraint is omitted (key minimisation).
    """
    h = inst.h
    zero = (ZERO,) * h
    ones = (Fraction(1),) * h
    all_idx = list(range(1, h + 1))
    pre = [Constraint("rate-nonneg[M]", zero, R_M, "<=", "R_M >= 0")]
    if R_K is not None:
        pre.append(Constraint("rate-nonneg[K]", zero, R_K, "<=", "R_K >= 0"))
    for j, R_j in enumerate(equivocations, start=1):
        pre.append(Constraint(f"rate-nonneg[{j}]", zero, R_j, "<=", f"R_{j} >= 0"))
        pre.append(
            Constraint(f"equivocation-cap[{j}]", zero, R_M - R_j, "<=", f"R_{j} <= R_M")
        )

    rows = []
    for i, C in enumerate(inst.capacities, start=1):
        unit = tuple(Fraction(1) if k == i else ZERO for k in all_idx)
        neg = tuple(-a for a in unit)
        rows.append(Constraint(f"nonneg[{i}]", neg, ZERO, "<=", f"r_{i} >= 0"))
        rows.append(Constraint(f"capacity[{i}]", unit, Fraction(C), "<=", f"r_{i} <= C_{i}"))
    total = _sum_text(all_idx)
    if R_K is not None:
        if variant == KEY_RECOVERED:
            rows.append(Constraint("key", ones, R_M + R_K, "==", f"R_K == {total} - R_M"))
        else:
            rows.append(Constraint("key", ones, R_M + R_K, "<=", f"R_K >= {total} - R_M"))
    rows.append(
        Constraint("message", tuple(-a for a in ones), -R_M, "<=", f"R_M <= {total}")
    )
    for j, R_j in enumerate(equivocations):
        comp = inst.complement(j)
        coeffs = tuple(Fraction(-1) if i in comp else ZERO for i in all_idx)
        rows.append(
            Constraint(f"equivocation[{j + 1}]", coeffs, -R_j, "<=", f"R_{j + 1} <= {_sum_text(comp)}")
        )
    return pre, rows


def _farkas(cons: Sequence[Constraint], h: int) -> Certificate:
    """Solve for multipliers y (y >= 0 on inequalities) with y.A = 0, y.b = -1."""
    cols: list[tuple[int, Fraction]] = []
    for k, con in enumerate(cons):
        cols.append((k, Fraction(1)))
        if con.sense == "==":
            cols.append((k, Fraction(-1)))
    A_eq = [[sign * cons[k].coeffs[i] for k, sign in cols] for i in range(h)]
    A_eq.append([sign * cons[k].rhs for k, sign in cols])
    b_eq = [ZERO] * h + [Fraction(-1)]
    res = lp.linprog([Fraction(1)] * len(cols), A_eq=A_eq, b_eq=b_eq)
    if res.status != lp.OPTIMAL:
        raise AssertionError("Farkas system unsolvable for an infeasible LP")
    y = [ZERO] * len(cons)
    for (k, sign), v in zip(cols, res.x):
        y[k] += sign * v
    mult = tuple((y[k], cons[k]) for k in range(len(cons)) if y[k] != 0)
    return Certificate(mult, sum((v * c.rhs for v, c in mult), ZERO))


def _precheck(pre: Sequence[Constraint]) -> Certificate | None:
    for con in pre:
        if con.rhs < 0:
            return Certificate(((Fraction(1), con),), con.rhs)
    return None


def _lp_parts(cons: Sequence[Constraint]):
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for con in cons:
        if con.name.startswith("nonneg["):
            continue  # implied by the solver's x >= 0
        if con.sense == "==":
            A_eq.append(con.coeffs)
            b_eq.append(con.rhs)
        else:
            A_ub.append(con.coeffs)
            b_ub.append(con.rhs)
    return A_ub, b_ub, A_eq, b_eq


def _check_dims(inst: ProblemInstance, d: int) -> None:
    if d != inst.d:
        raise DimensionError(f"tuple has {d} equivocations but the instance has {inst.d} wiretap sets")


def check_membership(query: RegionQuery) -> FeasibilityResult:
    inst, tup, variant = query.instance, query.tuple, query.variant
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    _check_dims(inst, tup.d)
    pre, rows = rate_constraints(inst, tup.R_M, tup.equivocations, tup.R_K, variant)
    cert = _precheck(pre)
    if cert is not None:
        return FeasibilityResult(False, variant, certificate=cert)
    res = lp.linprog([ZERO] * inst.h, *_lp_parts(rows))
    if res.status == lp.INFEASIBLE:
        return FeasibilityResult(False, variant, certificate=_farkas(rows, inst.h))
    return FeasibilityResult(True, variant, witness=RateAllocation(res.x))


def _lex_min(rows: list[Constraint], h: int, first: Sequence[Fraction]) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Minimise ``first . r``; break ties by lexicographically smallest r."""
    units = [[Fraction(1) if k == i else ZERO for k in range(h)] for i in range(h)]
    # with first . r fixed at a positive all-ones objective, the last
    # coordinate is pinned by the others
    if all(first):
        units = units[:-1]
    res = lp.lexmin([first] + units, *_lp_parts(rows))
    if res.status == lp.INFEASIBLE:
        raise _Infeasible
    if res.status != lp.OPTIMAL:
        raise AssertionError(f"LP unexpectedly {res.status}")
    return res.value, res.x


def minimize_key_rate(
    instance: ProblemInstance, R_M, equivocations: Sequence
) -> tuple[Fraction, RateAllocation]:
    """Smallest key rate compatible with ``R_M`` and the equivocation targets.

    Raises :class:`InfeasibleError` when no allocation meets them.
    """
    R_M = to_rational(R_M)
    eqv = [to_rational(r) for r in equivocations]
    _check_dims(instance, len(eqv))
    pre, rows = rate_constraints(instance, R_M, eqv)
    cert = _precheck(pre)
    if cert is not None:
        raise InfeasibleError(cert)
    try:
        total, r = _lex_min(rows, instance.h, [Fraction(1)] * instance.h)
    except _Infeasible:
        raise InfeasibleError(_farkas(rows, instance.h)) from None
    return max(ZERO, total - R_M), RateAllocation(r)


@dataclass(frozen=True)
class IntegerParameters:
    """Block length n and the integer symbol counts of a length-n code."""

    n: int
    n_M: int
    n_K: int
    n_i: tuple[int, ...]
    c_prime: tuple[int, ...]
    C_prime: tuple[int, ...]

    @property
    def total(self) -> int:
        return self.n_M + self.n_K

    def violations(self, instance: ProblemInstance) -> list[str]:
        out = []
        if self.n < 1:
            out.append("block length must be positive")
        if self.n_M < 0 or self.n_K < 0:
            out.append("symbol counts must be nonnegative")
        if len(self.n_i) != instance.h or len(self.C_prime) != instance.h:
            out.append("per-channel lists must have one entry per channel")
            return out
        if len(self.c_prime) != instance.d:
            out.append("leakage bounds must have one entry per wiretap set")
            return out
        if self.n_M != sum(self.n_i) - self.n_K:
            out.append(f"n_M={self.n_M} != sum(n_i) - n_K = {sum(self.n_i) - self.n_K}")
        for i, (ni, Ci) in enumerate(zip(self.n_i, self.C_prime), start=1):
            if not 0 <= ni <= Ci:
                out.append(f"n_{i}={ni} outside [0, {Ci}]")
        for j, s in enumerate(instance.canonical_sets):
            seen = sum(self.n_i[i - 1] for i in s)
            if seen > self.n_K + self.c_prime[j]:
                out.append(
                    f"wiretap set {j + 1} sees {seen} symbols > n_K + c'_{j + 1} = {self.n_K + self.c_prime[j]}"
                )
            if self.c_prime[j] < 0:
                out.append(f"c'_{j + 1}={self.c_prime[j]} is negative")
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "n_M": self.n_M,
            "n_K": self.n_K,
            "n_i": list(self.n_i),
            "c_prime": list(self.c_prime),
            "C_prime": list(self.C_prime),
        }

    @classmethod
    def from_dict(cls, data: dict) -> IntegerParameters:
        return cls(
            int(data["n"]),
            int(data["n_M"]),
            int(data["n_K"]),
            tuple(int(v) for v in data["n_i"]),
            tuple(int(v) for v in data["c_prime"]),
            tuple(int(v) for v in data["C_prime"]),
        )


def scale_to_integers(
    tuple_: RateTuple, witness: RateAllocation, instance: ProblemInstance
) -> IntegerParameters:
    """Smallest block length making every rate an integer symbol count.

    ``(tuple_, witness)`` must satisfy the key-recovered constraints,
    i.e. ``R_K == sum(r) - R_M``.
    """
    _check_dims(instance, tuple_.d)
    if len(witness.r) != instance.h:
        raise DimensionError("witness length does not match the channel count")
    _, rows = rate_constraints(
        instance, tuple_.R_M, tuple_.equivocations, tuple_.R_K, KEY_RECOVERED
    )
    broken = [c.name for c in rows if not c.holds(witness.r)]
    if broken:
        raise ValueError(f"tuple/witness violate key-recovered constraints: {broken}")
    slacks = [tuple_.R_M - R_j for R_j in tuple_.equivocations]
    values = [tuple_.R_M, tuple_.R_K, *witness.r, *slacks]
    n = math.lcm(*(v.denominator for v in values))

    def scaled(v: Fraction) -> int:
        w = v * n
        assert w.denominator == 1
        return w.numerator

    params = IntegerParameters(
        n=n,
        n_M=scaled(tuple_.R_M),
        n_K=scaled(tuple_.R_K),
        n_i=tuple(scaled(r) for r in witness.r),
        c_prime=tuple(scaled(c) for c in slacks),
        C_prime=tuple(n * C for C in instance.capacities),
    )
    bad = params.violations(instance)
    if bad:
        raise ValueError("; ".join(bad))
    return params
