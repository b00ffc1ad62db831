"""Encoder and decoder for a synthesized :class:`~wiretap2.synth.LinearCode`.

Both accept a single word (1-D) or a batch (2-D, one word per row).
"""

from __future__ import annotations

import numpy as np

from .synth import LinearCode


class DimensionError(ValueError):
    pass


def _words(code: LinearCode, v, length: int, what: str) -> tuple[np.ndarray, bool]:
    arr = code.field.array(v)
    single = arr.ndim == 1
    arr = arr.reshape(1, -1) if single else arr
    if arr.ndim != 2 or arr.shape[1] != length:
        raise DimensionError(f"{what} must have {length} symbols, got {arr.shape[-1]}")
    return arr, single


def encode(code: LinearCode, m, k) -> np.ndarray:
    """Channel word ``G . (m; k)``."""
    M, single = _words(code, m, code.n_M, "message")
    K, _ = _words(code, k, code.n_K, "key")
    if M.shape[0] != K.shape[0]:
        raise DimensionError("message and key batches differ in size")
    X = code.field.matmul(np.hstack([M, K]), code.generator.T)
    return X[0] if single else X


def decode(code: LinearCode, x) -> tuple[np.ndarray, np.ndarray]:
    """Recover ``(m, k)``: the key sits in the first n_K positions and each
    later position is ``m_i + b_i . k``."""
    X, single = _words(code, x, code.params.total, "channel word")
    F = code.field
    nK = code.n_K
    K = X[:, :nK]
    pad = F.matmul(K, code.B[nK:].T)
    M = F.add_table[X[:, nK:], F.neg_table[pad]]
    if single:
        return M[0], K[0]
    return M, K


def random_key(code: LinearCode, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    shape = (code.n_K,) if size is None else (size, code.n_K)
    return rng.integers(0, code.field.q, size=shape, dtype=np.int64)


def by_channel(code: LinearCode, x) -> list[list[int]]:
    x = np.asarray(x)
    return [x[lo:hi].tolist() for lo, hi in code.layout]
