"""Finite fields GF(p^m) in polynomial basis, plus exact linear algebra.

An element is the int whose base-p digits are its polynomial coefficients
(constant term least significant). The modulus is the lexicographically
smallest monic irreducible of degree m, coefficients compared constant
term first, so a given q always yields the same presentation.

Addition and multiplication are computed polynomially once, into q x q
tables, and the matrix routines in :mod:`wiretap2._kernels` index those.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels
from .model import prime_power

MAX_FIELD = 1 << 10


class FieldError(ValueError):
    pass


class NoSolution(Exception):
    pass


def _poly_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    a = list(a)
    m = len(mod) - 1
    for deg in range(len(a) - 1, m - 1, -1):
        c = a[deg] % p
        if c:
            for k in range(m + 1):
                a[deg - m + k] = (a[deg - m + k] - c * mod[k]) % p
    return [v % p for v in a[:m]] + [0] * max(0, m - len(a))


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _divides(g: Sequence[int], f: Sequence[int], p: int) -> bool:
    return not any(_poly_mod(list(f), g, p))


def _monic(coeffs_low: Sequence[int]) -> list[int]:
    return list(coeffs_low) + [1]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..m//2."""
    m = len(modulus) - 1
    if m < 1 or modulus[-1] != 1:
        return False
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if _divides(_monic(low), modulus, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=m):
        cand = _monic(low)
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # unreachable


class GF:
    """GF(p^m) with cached operation tables.

    Use :func:`make_field` rather than constructing directly.
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int]):
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = tuple(int(c) for c in modulus)
        if len(self.modulus) != m + 1 or not is_irreducible(self.modulus, p):
            raise FieldError(f"modulus {self.modulus} is not monic irreducible of degree {m}")
        q = self.q
        polys = [self.coeffs(a) for a in range(q)]
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                s = self.from_coeffs([(x + y) % p for x, y in zip(polys[a], polys[b])])
                prod = self.from_coeffs(_poly_mod(_poly_mul(polys[a], polys[b], p), self.modulus, p))
                add[a, b] = add[b, a] = s
                mul[a, b] = mul[b, a] = prod
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv
        for t in (add, mul, self.neg_table, inv):
            t.setflags(write=False)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    # element encoding
    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        v = 0
        for c in reversed(list(coeffs)[: self.m]):
            v = v * self.p + c % self.p
        return v

    # scalar arithmetic
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> GF:
        gf = make_field(int(data["p"]) ** int(data["m"]))
        if list(gf.modulus) != [int(c) for c in data["modulus"]]:
            return cls(int(data["p"]), int(data["m"]), data["modulus"])
        return gf

    # linear algebra
    def array(self, M) -> np.ndarray:
        A = np.asarray(M, dtype=np.int64)
        if A.size and (A.min() < 0 or A.max() >= self.q):
            raise FieldError(f"entries must lie in [0, {self.q})")
        return A

    def matrix(self, M, cols: int | None = None) -> np.ndarray:
        A = self.array(M)
        if A.ndim == 1 and A.size == 0:
            A = A.reshape(0, cols or 0)
        if A.ndim != 2:
            raise FieldError("expected a 2-D matrix")
        return A

    def rref(self, M) -> tuple[np.ndarray, np.ndarray]:
        """Reduced row echelon form and pivot columns."""
        A = self.matrix(M)
        if A.shape[0] == 0 or A.shape[1] == 0:
            return A.copy(), np.zeros(0, dtype=np.int64)
        return _kernels.rref(A, self.add_table, self.mul_table, self.neg_table, self.inv_table)

    def rank(self, M) -> int:
        return int(self.rref(M)[1].size)

    def matmul(self, A, B) -> np.ndarray:
        A = self.matrix(A)
        B = self.matrix(B)
        if A.shape[1] != B.shape[0]:
            raise FieldError(f"shape mismatch {A.shape} x {B.shape}")
        if A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        return _kernels.matmul(A, B, self.add_table, self.mul_table)

    def matvec(self, A, v) -> np.ndarray:
        return self.matmul(A, self.array(v).reshape(-1, 1))[:, 0]

    def in_span(self, v, rows) -> bool:
        v = self.array(v)
        R = self.matrix(rows, cols=v.size)
        if R.shape[1] != v.size:
            raise FieldError("vector length does not match the basis rows")
        if not v.any():
            return True
        return self.rank(np.vstack([R, v[None, :]])) == self.rank(R)

    def solve(self, A, y) -> np.ndarray:
        """Some x with A x = y; raises :class:`NoSolution` if none exists."""
        A = self.matrix(A)
        y = self.array(y)
        if A.shape[0] != y.size:
            raise FieldError("row count does not match the right-hand side")
        aug = np.hstack([A, y.reshape(-1, 1)])
        R, piv = self.rref(aug)
        cols = A.shape[1]
        if piv.size and piv[-1] == cols:
            raise NoSolution
        x = np.zeros(cols, dtype=np.int64)
        for r, c in enumerate(piv):
            x[c] = R[r, cols]
        return x


@lru_cache(maxsize=None)
def make_field(q: int) -> GF:
    pm = prime_power(q)
    if pm is None:
        raise FieldError(f"q={q} not a prime power")
    if q > MAX_FIELD:
        raise FieldError(f"q={q} out of supported range (q <= {MAX_FIELD})")
    p, m = pm
    return GF(p, m, smallest_irreducible(p, m))
