"""Time the exhaustive integer kernels on both backends.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--pairs kp swap3 ...]

Each kernel runs once untimed (numba compilation), then ``repeat`` times;
the best wall-clock time is reported together with an agreement check
between the numba and numpy results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qgext import kernels
from qgext.bicrossed import build_quantum_group, build_theta
from qgext.cohomology import cocycle_representatives, extension_group
from qgext.fixtures import fixture_pairs


def best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases(pair):
    c = cocycle_representatives(pair, extension_group(pair).exponent)[-1]
    qg = build_quantum_group(pair, c)
    theta, _ = build_theta(pair, c)
    n1, n2 = pair.n1, pair.n2
    tables = [np.ascontiguousarray(x, dtype=np.int64) for x in (pair.alpha, pair.beta, pair.G1.table, pair.G2.table)]
    W = qg.W
    th = np.ascontiguousarray(np.asarray(theta.phase).reshape(n1, n2, n1, n2), dtype=np.int64)
    inv1 = np.ascontiguousarray(pair.G1.inverse, dtype=np.int64)
    U = np.ascontiguousarray(c.U, dtype=np.int64)
    V = np.ascontiguousarray(c.V, dtype=np.int64)
    D = c.den
    return {
        "cocycle": (lambda: kernels._cocycle_residuals_numba(*tables, U, V, np.int64(D)),
                    lambda: kernels._cocycle_residuals_numpy(*tables, U, V, D)),
        "pentagon": (lambda: kernels._pentagon_numba(W.rows, W.phase, np.int64(pair.n), np.int64(W.den)),
                     lambda: kernels._pentagon_numpy(W.rows, W.phase, pair.n, W.den)),
        "mu": (lambda: kernels._mu_numba(th, *tables, inv1, np.int64(theta.den)),
               lambda: kernels._mu_numpy(th, *tables, inv1, theta.den)),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--pairs", nargs="+", default=["kp", "swap3", "s4", "swap4"])
    args = p.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    pairs = fixture_pairs()
    print(f"{'pair':8} {'kernel':9} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8}  agree")
    for name in args.pairs:
        for kernel, (fast, slow) in cases(pairs[name]).items():
            t_nb, out_nb = best_of(fast, args.repeat)
            t_np, out_np = best_of(slow, args.repeat)
            print(f"{name:8} {kernel:9} {1e3 * t_nb:11.3f} {1e3 * t_np:11.3f} {t_np / t_nb:8.1f}  "
                  f"{_same(out_nb, out_np)}")


if __name__ == "__main__":
    main()
