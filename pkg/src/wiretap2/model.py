"""Problem instances, rate tuples and the exact rational scalars shared by
every other module.

Rates are in log-q units. All scalars are :class:`fractions.Fraction`, so
comparisons and arithmetic are exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

Rational = Fraction

MAX_Q = 2**32


class InstanceError(ValueError):
    """Raised when an instance or tuple file cannot be parsed."""


def to_rational(value: Any) -> Fraction:
    """Parse an int, a ``"p/q"`` string or a Fraction into a Fraction.

    Floats are rejected; they cannot carry exact rates.
    """
    if isinstance(value, bool):
        raise InstanceError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceError(f"not a rational: {value!r}") from exc
    raise InstanceError(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``q == p**m`` and p prime, or None."""
    if q < 2 or q > MAX_Q:
        return None
    n = q
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        return (q, 1)
    m = 0
    while n % p == 0:
        n //= p
        m += 1
    return (p, m) if n == 1 else None


@dataclass(frozen=True)
class ProblemInstance:
    """Channels e_1..e_h with integer capacities and a wiretap collection.

    ``wiretap_sets`` holds 1-based channel indices in input order;
    :attr:`canonical_sets` is the sorted, deduplicated form used internally.
    """

    capacities: tuple[int, ...]
    q: int
    wiretap_sets: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "capacities", tuple(int(c) for c in self.capacities))
        object.__setattr__(
            self, "wiretap_sets", tuple(tuple(int(i) for i in s) for s in self.wiretap_sets)
        )

    @property
    def h(self) -> int:
        return len(self.capacities)

    @property
    def d(self) -> int:
        return len(self.wiretap_sets)

    @property
    def canonical_sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(set(s))) for s in self.wiretap_sets)

    def complement(self, j: int) -> tuple[int, ...]:
        """Channels outside wiretap set ``j`` (0-based set index)."""
        inside = set(self.wiretap_sets[j])
        return tuple(i for i in range(1, self.h + 1) if i not in inside)

    @classmethod
    def from_dict(cls, data: dict) -> ProblemInstance:
        try:
            q = data["q"]
            caps = data["capacities"]
            sets = data.get("wiretap_sets", [])
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"instance is missing field {exc}") from exc
        if not isinstance(q, int) or isinstance(q, bool):
            raise InstanceError("q must be an integer")
        if not isinstance(caps, list) or not all(isinstance(c, int) for c in caps):
            raise InstanceError("capacities must be a list of integers")
        if not isinstance(sets, list) or not all(
            isinstance(s, list) and all(isinstance(i, int) for i in s) for s in sets
        ):
            raise InstanceError("wiretap_sets must be a list of integer lists")
        return cls(tuple(caps), q, tuple(tuple(s) for s in sets))

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "capacities": list(self.capacities),
            "wiretap_sets": [list(s) for s in self.wiretap_sets],
        }


@dataclass(frozen=True)
class RateTuple:
    R_M: Fraction
    R_K: Fraction
    equivocations: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "R_M", to_rational(self.R_M))
        object.__setattr__(self, "R_K", to_rational(self.R_K))
        object.__setattr__(
            self, "equivocations", tuple(to_rational(r) for r in self.equivocations)
        )

    @property
    def d(self) -> int:
        return len(self.equivocations)

    def with_key_rate(self, R_K: Fraction) -> RateTuple:
        return RateTuple(self.R_M, R_K, self.equivocations)

    @classmethod
    def from_dict(cls, data: dict) -> RateTuple:
        try:
            return cls(data["R_M"], data["R_K"], tuple(data.get("equivocations", [])))
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"tuple is missing field {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "R_M": format_rational(self.R_M),
            "R_K": format_rational(self.R_K),
            "equivocations": [format_rational(r) for r in self.equivocations],
        }


@dataclass(frozen=True)
class RateAllocation:
    """Per-channel rates r_1..r_h witnessing membership in a region."""

    r: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(to_rational(x) for x in self.r))

    def total(self) -> Fraction:
        return sum(self.r, Fraction(0))

    def within(self, capacities: Sequence[int]) -> bool:
        return len(self.r) == len(capacities) and all(
            0 <= x <= c for x, c in zip(self.r, capacities)
        )

    def to_list(self) -> list[str]:
        return [format_rational(x) for x in self.r]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_instance(inst: ProblemInstance) -> ValidationReport:
    violations: list[str] = []
    warnings: list[str] = []
    if inst.h < 1:
        violations.append("empty channel set")
    for i, c in enumerate(inst.capacities, start=1):
        if c < 1:
            violations.append(f"capacity C_{i}={c} must be a positive integer")
    if inst.q > MAX_Q:
        violations.append(f"q={inst.q} exceeds the supported bound 2^32")
    elif prime_power(inst.q) is None:
        violations.append(f"q={inst.q} not a prime power")
    seen: dict[tuple[int, ...], int] = {}
    for j, s in enumerate(inst.wiretap_sets, start=1):
        bad = [i for i in s if not 1 <= i <= inst.h]
        if bad:
            violations.append(f"wiretap set {j} has channel index out of range: {bad}")
            continue
        canon = tuple(sorted(set(s)))
        label = "{" + ",".join(map(str, canon)) + "}"
        if canon in seen:
            warnings.append(f"wiretap set {label} duplicates set {seen[canon]}")
        else:
            seen[canon] = j
        if inst.h >= 1 and len(canon) == inst.h:
            warnings.append(f"wiretap set {label} covers all channels")
    return ValidationReport(tuple(violations), tuple(warnings))


def slack(tuple_: RateTuple, j: int) -> Fraction:
    """Permitted leakage c_j = R_M - R_j for wiretap set ``j`` (1-based)."""
    if not 1 <= j <= tuple_.d:
        raise IndexError(f"wiretap index {j} out of range 1..{tuple_.d}")
    return tuple_.R_M - tuple_.equivocations[j - 1]


def load_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from exc


def load_instance(path: str | Path) -> ProblemInstance:
    return ProblemInstance.from_dict(load_json(path))


def load_tuple(path: str | Path) -> RateTuple:
    return RateTuple.from_dict(load_json(path))
