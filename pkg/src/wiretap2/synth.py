"""Linear coset code construction.

The sent symbols x_1..x_N (N = n_K + n_M) are laid out channel by channel.
The first n_K positions carry the key symbols; every later position j
carries ``m_{j - n_K} + b_j . k``. The generator over ``(m; k)`` is

    [ 0    | I_{n_K} ]
    [ I_nM | b_rows  ]

Each b_j is chosen greedily: for every wiretap set that sees position j
and has not yet collected n_K independent key rows, b_j must fall outside
the span of the key rows that set already sees. Picking the
lexicographically first such vector makes synthesis deterministic. A
vector exists whenever q exceeds the number of such spans.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .gf import GF, make_field
from .model import InstanceError, ProblemInstance, RateAllocation, RateTuple
from .region import IntegerParameters

CODE_FORMAT = "wiretap2-code/1"


class InvalidParams(ValueError):
    pass


class ConstructionFailed(Exception):
    def __init__(self, step: int, sets: Sequence[Sequence[int]]):
        self.step = step
        self.sets = tuple(tuple(s) for s in sets)
        names = " ".join("{" + ",".join(map(str, s)) + "}" for s in self.sets)
        super().__init__(
            f"no extension vector at position {step}: key rows seen by wiretap sets {names} cover GF(q)^n_K"
        )


class NotFound(Exception):
    pass


def channel_layout(n_i: Sequence[int]) -> list[tuple[int, int]]:
    """Half-open 0-based position ranges, channel e_1 first."""
    out = []
    start = 0
    for k in n_i:
        out.append((start, start + k))
        start += k
    return out


@dataclass(frozen=True, eq=False)
class LinearCode:
    field: GF
    params: IntegerParameters
    generator: np.ndarray
    layout: tuple[tuple[int, int], ...]

    @property
    def n_M(self) -> int:
        return self.params.n_M

    @property
    def n_K(self) -> int:
        return self.params.n_K

    @property
    def A(self) -> np.ndarray:
        return self.generator[:, : self.n_M]

    @property
    def B(self) -> np.ndarray:
        return self.generator[:, self.n_M :]

    @property
    def b_vectors(self) -> np.ndarray:
        return self.B

    def positions(self, channels: Sequence[int]) -> list[int]:
        """Sorted symbol positions carried by the given 1-based channels."""
        out: list[int] = []
        for c in sorted(set(channels)):
            lo, hi = self.layout[c - 1]
            out.extend(range(lo, hi))
        return out

    def has_block_structure(self) -> bool:
        G = self.generator
        nK, nM = self.n_K, self.n_M
        return (
            G.shape == (nK + nM, nK + nM)
            and not G[:nK, :nM].any()
            and np.array_equal(G[:nK, nM:], np.eye(nK, dtype=np.int64))
            and np.array_equal(G[nK:, :nM], np.eye(nM, dtype=np.int64))
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearCode)
            and self.field == other.field
            and self.params == other.params
            and self.layout == other.layout
            and np.array_equal(self.generator, other.generator)
        )

    def to_dict(self) -> dict:
        return {
            "format": CODE_FORMAT,
            "field": self.field.to_dict(),
            "params": self.params.to_dict(),
            "channel_layout": [list(r) for r in self.layout],
            "generator": self.generator.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> LinearCode:
        try:
            field = GF.from_dict(data["field"])
            params = IntegerParameters.from_dict(data["params"])
            layout = tuple(tuple(int(v) for v in r) for r in data["channel_layout"])
            G = np.array(data["generator"], dtype=np.int64).reshape(params.total, -1)
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"malformed code file: {exc}") from exc
        if G.shape[1] != params.total:
            raise InstanceError("generator must be square of size n_M + n_K")
        if G.size and (G.min() < 0 or G.max() >= field.q):
            raise InstanceError("generator entries outside the field")
        if layout != tuple(channel_layout(params.n_i)):
            raise InstanceError("channel_layout does not match n_i")
        G.setflags(write=False)
        return cls(field, params, G, layout)


def load_code(path: str | Path) -> LinearCode:
    from .model import load_json

    return LinearCode.from_dict(load_json(path))


def _span_stack(field: GF, spans: Sequence[np.ndarray], n: int):
    """Pack RREF bases of the spans into padded arrays for the kernel."""
    s = len(spans)
    width = max([sp.shape[0] for sp in spans] + [1])
    bases = np.zeros((s, width, n), dtype=np.int64)
    pivots = np.zeros((s, width), dtype=np.int64)
    counts = np.zeros(s, dtype=np.int64)
    for i, sp in enumerate(spans):
        R, piv = field.rref(np.asarray(sp, dtype=np.int64).reshape(-1, n))
        k = piv.size
        bases[i, :k] = R[:k]
        pivots[i, :k] = piv
        counts[i] = k
    return bases, pivots, counts


def choose_extension_vector(field: GF, spans: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Lexicographically first vector of GF(q)^n outside every span.

    Coordinates compare by their integer encoding, leftmost most
    significant. Raises :class:`NotFound` when the spans cover everything.
    """
    bases, pivots, counts = _span_stack(field, spans, n)
    idx = _kernels.first_outside(
        bases, pivots, counts, n, field.q, field.add_table, field.mul_table, field.neg_table
    )
    if idx < 0:
        raise NotFound
    out = np.zeros(n, dtype=np.int64)
    for t in range(n - 1, -1, -1):
        out[t] = idx % field.q
        idx //= field.q
    return out


def reduce_key(tuple_: RateTuple, witness: RateAllocation) -> RateTuple:
    """Drop surplus key rate: R_K becomes max(0, sum(r) - R_M)."""
    if witness.total() - tuple_.R_M > tuple_.R_K:
        raise ValueError("witness needs more key than the tuple provides")
    return tuple_.with_key_rate(max(Fraction(0), witness.total() - tuple_.R_M))


def synthesize(instance: ProblemInstance, params: IntegerParameters, field: GF | None = None) -> LinearCode:
    bad = params.violations(instance)
    if bad:
        raise InvalidParams("; ".join(bad))
    field = field or make_field(instance.q)
    if field.q != instance.q:
        raise InvalidParams(f"field size {field.q} != instance q {instance.q}")
    nK, nM = params.n_K, params.n_M
    N = nK + nM
    layout = channel_layout(params.n_i)
    chan_of = np.empty(N, dtype=np.int64)
    for c, (lo, hi) in enumerate(layout, start=1):
        chan_of[lo:hi] = c
    sets = list(dict.fromkeys(instance.canonical_sets))

    B = np.zeros((N, nK), dtype=np.int64)
    B[:nK] = np.eye(nK, dtype=np.int64)
    seen: list[list[int]] = [[] for _ in sets]
    for j in range(N):
        watchers = [i for i, s in enumerate(sets) if chan_of[j] in s]
        if j >= nK and nK:
            hungry = [i for i in watchers if len(seen[i]) < nK]
            spans = [B[seen[i]] for i in hungry]
            try:
                B[j] = choose_extension_vector(field, spans, nK)
            except NotFound:
                raise ConstructionFailed(j + 1, [sets[i] for i in hungry]) from None
        for i in watchers:
            seen[i].append(j)

    G = np.zeros((N, N), dtype=np.int64)
    G[nK:, :nM] = np.eye(nM, dtype=np.int64)
    G[:, nM:] = B
    G.setflags(write=False)
    return LinearCode(field, params, G, tuple(layout))
