"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each case runs both backends on identical inputs, checks the outputs
agree, and reports the best wall time of ``--repeat`` runs. JIT
compilation happens in an untimed warm-up call.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from wiretap2 import _kernels as K
from wiretap2.gf import make_field


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases(rng):
    for q, size in ((2, 64), (16, 48), (251, 32)):
        F = make_field(q)
        M = rng.integers(0, q, size=(size, size))
        args = (M, F.add_table, F.mul_table, F.neg_table, F.inv_table)
        yield f"rref {size}x{size} GF({q})", K.np_rref, getattr(K, "nb_rref", None), args

    for q, rows in ((4, 4096), (9, 2048)):
        F = make_field(q)
        A = rng.integers(0, q, size=(rows, 12))
        B = rng.integers(0, q, size=(12, 12))
        yield f"matmul {rows}x12x12 GF({q})", K.np_matmul, getattr(K, "nb_matmul", None), (A, B, F.add_table, F.mul_table)

    for q, n, s in ((4, 5, 3), (5, 6, 4)):
        F = make_field(q)
        bases = np.zeros((s, n - 1, n), dtype=np.int64)
        pivots = np.zeros((s, n - 1), dtype=np.int64)
        counts = np.zeros(s, dtype=np.int64)
        for i in range(s):
            R, piv = F.rref(rng.integers(0, q, size=(n - 1, n)))
            counts[i] = piv.size
            bases[i, : piv.size] = R[: piv.size]
            pivots[i, : piv.size] = piv
        args = (bases, pivots, counts, n, q, F.add_table, F.mul_table, F.neg_table)
        yield f"first_outside n={n} spans={s} GF({q})", K.np_first_outside, getattr(K, "nb_first_outside", None), args

    for q, n_M, n_K, N in ((2, 10, 8, 18), (4, 5, 4, 9), (3, 7, 5, 12)):
        F = make_field(q)
        D = n_M + n_K
        G = rng.integers(0, q, size=(N, D))
        obs = [(False, list(range(N))), (True, [])]
        for _ in range(3):
            pick = sorted(rng.permutation(N)[: N // 2].tolist())
            obs += [(False, pick), (True, pick)]
        rows = np.zeros((len(obs), N), dtype=np.int64)
        lens = np.array([len(r) for _, r in obs], dtype=np.int64)
        with_m = np.array([w for w, _ in obs], dtype=np.bool_)
        for o, (_, r) in enumerate(obs):
            rows[o, : len(r)] = r
        args = (G, n_M, n_K, rows, lens, with_m, q, F.add_table, F.mul_table, F.neg_table)
        yield f"entropy_sums {q}^{D} states, {len(obs)} obs", K.np_entropy_sums, getattr(K, "nb_entropy_sums", None), args


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if K.BACKEND != "numba":
        print("numba backend disabled; timing the numpy path only")
    rng = np.random.default_rng(args.seed)
    print(f"{'case':<40} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, np_fn, nb_fn, fargs in cases(rng):
        t_np, out_np = best_of(lambda: np_fn(*fargs), args.repeat)
        if nb_fn is None:
            print(f"{name:<40} {t_np:>10.4f} {'-':>10} {'-':>8}")
            continue
        nb_fn(*fargs)  # compile
        t_nb, out_nb = best_of(lambda: nb_fn(*fargs), args.repeat)
        if not _same(out_np, out_nb):
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<40} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
