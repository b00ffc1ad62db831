"""Hot loops over GF(q) with two interchangeable backends.

Field elements are ints in ``[0, q)``; arithmetic goes through the
``add``/``mul``/``neg``/``inv`` tables built by :class:`wiretap2.gf.GF`.
The numba backend is used when numba imports and neither
``WIRETAP2_NO_NUMBA`` nor ``NUMBA_DISABLE_JIT`` is set to a non-empty,
non-"0" value; otherwise the vectorised numpy versions are exported.
Both backends return identical results.
"""

from __future__ import annotations

import os

import numpy as np


def _flag(name: str) -> bool:
    return os.environ.get(name, "") not in ("", "0")


# ---------------------------------------------------------------- numpy


def np_rref(M, add, mul, neg, inv):
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = mul[R[r], inv[R[r, c]]]
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            f = neg[R[others, c]]
            R[others] = add[R[others], mul[f[:, None], R[r][None, :]]]
        pivots.append(c)
        r += 1
    return R, np.array(pivots, dtype=np.int64)


def np_matmul(A, B, add, mul):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = add[out, mul[A[:, k][:, None], B[k][None, :]]]
    return out


def _np_digits(idx, q, n):
    """Rows of base-q digits, leftmost most significant."""
    out = np.empty((idx.size, n), dtype=np.int64)
    v = idx.copy()
    for t in range(n - 1, -1, -1):
        out[:, t] = v % q
        v //= q
    return out


def _np_reduce(V, basis, pivots, add, mul, neg):
    V = V.copy()
    for t in range(pivots.size):
        f = neg[V[:, pivots[t]]]
        V = add[V, mul[f[:, None], basis[t][None, :]]]
    return V


def np_first_outside(bases, pivots, counts, n, q, add, mul, neg):
    total = q**n
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        V = _np_digits(idx, q, n)
        outside = np.ones(idx.size, dtype=bool)
        for s in range(counts.size):
            k = counts[s]
            res = _np_reduce(V, bases[s, :k], pivots[s, :k], add, mul, neg)
            outside &= res.any(axis=1)
        hit = np.nonzero(outside)[0]
        if hit.size:
            return int(idx[hit[0]])
    return -1


def _np_log_sum(counts, q):
    """Sum of c * log_q(c) over group sizes; (value, all sizes powers of q)."""
    vals, mult = np.unique(counts, return_counts=True)
    total = 0
    ok = True
    for c, k in zip(vals.tolist(), mult.tolist()):
        t = 0
        v = c
        while v > 1 and v % q == 0:
            v //= q
            t += 1
        if v != 1:
            ok = False
        total += c * t * k
    return total, ok


def np_entropy_sums(G, n_M, n_K, obs_rows, obs_len, obs_with_m, q, add, mul, neg):
    D = n_M + n_K
    total = q**D
    U = _np_digits(np.arange(total, dtype=np.int64), q, D)
    if G.shape[0]:
        X = np_matmul(U, G.T, add, mul)
    else:
        X = np.zeros((total, 0), dtype=np.int64)
    m_idx = np.arange(total, dtype=np.int64) // (q**n_K)
    n_obs = obs_len.size
    S = np.zeros(n_obs, dtype=np.int64)
    ok = np.ones(n_obs, dtype=np.bool_)
    for o in range(n_obs):
        L = obs_len[o]
        key = np.zeros(total, dtype=np.int64)
        for t in range(L):
            key = key * q + X[:, obs_rows[o, t]]
        if obs_with_m[o]:
            key = m_idx * (q**L) + key
        _, counts = np.unique(key, return_counts=True)
        S[o], ok[o] = _np_log_sum(counts, q)
    return S, ok


# ---------------------------------------------------------------- numba

HAVE_NUMBA = False
if not (_flag("WIRETAP2_NO_NUMBA") or _flag("NUMBA_DISABLE_JIT")):
    try:
        import numba

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        pass

if HAVE_NUMBA:
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def nb_rref(M, add, mul, neg, inv):
        R = M.astype(np.int64).copy()
        rows, cols = R.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if R[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for k in range(cols):
                    tmp = R[r, k]
                    R[r, k] = R[piv, k]
                    R[piv, k] = tmp
            f = inv[R[r, c]]
            for k in range(c, cols):
                R[r, k] = mul[R[r, k], f]
            for i in range(rows):
                if i != r and R[i, c] != 0:
                    g = neg[R[i, c]]
                    for k in range(c, cols):
                        if R[r, k] != 0:
                            R[i, k] = add[R[i, k], mul[g, R[r, k]]]
            pivots[r] = c
            r += 1
        return R, pivots[:r].copy()

    @njit
    def nb_matmul(A, B, add, mul):
        n, inner = A.shape
        cols = B.shape[1]
        out = np.zeros((n, cols), dtype=np.int64)
        for i in range(n):
            for k in range(inner):
                a = A[i, k]
                if a == 0:
                    continue
                for j in range(cols):
                    b = B[k, j]
                    if b != 0:
                        out[i, j] = add[out[i, j], mul[a, b]]
        return out

    @njit
    def nb_first_outside(bases, pivots, counts, n, q, add, mul, neg):
        total = 1
        for _ in range(n):
            total *= q
        v = np.empty(n, dtype=np.int64)
        w = np.empty(n, dtype=np.int64)
        for idx in range(total):
            x = idx
            for t in range(n - 1, -1, -1):
                v[t] = x % q
                x //= q
            outside = True
            for s in range(counts.size):
                for t in range(n):
                    w[t] = v[t]
                for t in range(counts[s]):
                    c = pivots[s, t]
                    if w[c] != 0:
                        f = neg[w[c]]
                        for k in range(n):
                            b = bases[s, t, k]
                            if b != 0:
                                w[k] = add[w[k], mul[f, b]]
                nonzero = False
                for t in range(n):
                    if w[t] != 0:
                        nonzero = True
                        break
                if not nonzero:
                    outside = False
                    break
            if outside:
                return idx
        return -1

    @njit
    def _nb_log_term(c, q):
        t = 0
        v = c
        while v > 1 and v % q == 0:
            v //= q
            t += 1
        return c * t, v == 1

    @njit
    def nb_entropy_sums(G, n_M, n_K, obs_rows, obs_len, obs_with_m, q, add, mul, neg):
        N = G.shape[0]
        D = n_M + n_K
        total = 1
        for _ in range(D):
            total *= q
        block = 1
        for _ in range(n_K):
            block *= q
        n_obs = obs_len.size
        size = np.empty(n_obs, dtype=np.int64)
        off = np.zeros(n_obs + 1, dtype=np.int64)
        for o in range(n_obs):
            s = 1
            for _ in range(obs_len[o]):
                s *= q
            size[o] = s
            off[o + 1] = off[o] + s
        cnt = np.zeros(off[n_obs], dtype=np.int32)
        toff = np.zeros(n_obs + 1, dtype=np.int64)
        for o in range(n_obs):
            toff[o + 1] = toff[o] + (min(size[o], block) if obs_with_m[o] else 0)
        touched = np.empty(toff[n_obs], dtype=np.int64)
        ntouched = np.zeros(n_obs, dtype=np.int64)
        # per row, the observables it feeds and its place value in their keys
        rstart = np.zeros(N + 1, dtype=np.int64)
        for o in range(n_obs):
            for t in range(obs_len[o]):
                rstart[obs_rows[o, t] + 1] += 1
        for r in range(N):
            rstart[r + 1] += rstart[r]
        fill = rstart[:N].copy()
        robs = np.empty(rstart[N], dtype=np.int64)
        rw = np.empty(rstart[N], dtype=np.int64)
        for o in range(n_obs):
            w = size[o]
            for t in range(obs_len[o]):
                w //= q
                r = obs_rows[o, t]
                robs[fill[r]] = o
                rw[fill[r]] = w
                fill[r] += 1
        S = np.zeros(n_obs, dtype=np.int64)
        ok = np.ones(n_obs, dtype=np.bool_)
        x = np.zeros(N, dtype=np.int64)
        u = np.zeros(D, dtype=np.int64)
        key = off[:n_obs].copy()
        for s in range(total):
            for o in range(n_obs):
                pos = key[o]
                if obs_with_m[o] and cnt[pos] == 0:
                    touched[toff[o] + ntouched[o]] = pos
                    ntouched[o] += 1
                cnt[pos] += 1
            if (s + 1) % block == 0:
                for o in range(n_obs):
                    if obs_with_m[o]:
                        for t in range(ntouched[o]):
                            pos = touched[toff[o] + t]
                            term, good = _nb_log_term(np.int64(cnt[pos]), q)
                            S[o] += term
                            if not good:
                                ok[o] = False
                            cnt[pos] = 0
                        ntouched[o] = 0
            t = D - 1
            while t >= 0:
                a = u[t]
                b = a + 1
                if b == q:
                    b = 0
                delta = add[b, neg[a]]
                for r in range(N):
                    g = G[r, t]
                    if g != 0:
                        old = x[r]
                        new = add[old, mul[g, delta]]
                        x[r] = new
                        for e in range(rstart[r], rstart[r + 1]):
                            key[robs[e]] += (new - old) * rw[e]
                u[t] = b
                if b != 0:
                    break
                t -= 1
        for o in range(n_obs):
            if not obs_with_m[o]:
                for k in range(size[o]):
                    c = np.int64(cnt[off[o] + k])
                    if c:
                        term, good = _nb_log_term(c, q)
                        S[o] += term
                        if not good:
                            ok[o] = False
        return S, ok

    rref = nb_rref
    matmul = nb_matmul
    first_outside = nb_first_outside
    entropy_sums = nb_entropy_sums
    BACKEND = "numba"
else:
    rref = np_rref
    matmul = np_matmul
    first_outside = np_first_outside
    entropy_sums = np_entropy_sums
    BACKEND = "numpy"
