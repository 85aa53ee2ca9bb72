"""Integer kernels for the exhaustive finite checks.

Each kernel exists twice: a numba-compiled loop and a vectorized numpy
version.  The numpy path is used when numba is missing or when the
environment variable ``QGEXT_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.  ``QGEXT_THREADS`` sets the numba thread count.

All phases are integers modulo a common denominator ``D``.
"""

from __future__ import annotations

import os

import numpy as np

# The default layer probe warns about old TBB builds; OpenMP is always present with numba wheels.
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def _flag(name: str) -> bool:
    v = os.environ.get(name, "")
    return v not in ("", "0", "false", "False")


USE_NUMBA = HAVE_NUMBA and not _flag("QGEXT_DISABLE_NUMBA")

if HAVE_NUMBA and os.environ.get("QGEXT_THREADS"):
    try:
        numba.set_num_threads(max(1, min(int(os.environ["QGEXT_THREADS"]), numba.config.NUMBA_NUM_THREADS)))
    except ValueError:
        pass


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# cocycle equations


def _cocycle_residuals_numpy(alpha, beta, m1, m2, U, V, D):
    n1, n2 = alpha.shape
    g = np.arange(n1)[:, None, None, None]
    h = np.arange(n1)[None, :, None, None]
    k = np.arange(n1)[None, None, :, None]
    s = np.arange(n2)[None, None, None, :]
    r1 = (U[g, h, alpha[k, s]] + U[m1[g, h], k, s] - U[h, k, s] - U[g, m1[h, k], s]) % D
    g = np.arange(n1)[:, None, None, None]
    s = np.arange(n2)[None, :, None, None]
    t = np.arange(n2)[None, None, :, None]
    r = np.arange(n2)[None, None, None, :]
    r2 = (V[beta[s, g], t, r] + V[g, s, m2[r, t]] - V[g, s, t] - V[g, m2[t, s], r]) % D
    g = np.arange(n1)[:, None, None, None]
    h = np.arange(n1)[None, :, None, None]
    s = np.arange(n2)[None, None, :, None]
    t = np.arange(n2)[None, None, None, :]
    ahs = alpha[h, s]
    bsh = beta[s, h]
    r3 = (V[m1[g, h], s, t] - U[g, h, m2[t, s]] + U[g, h, s] + U[beta[ahs, g], bsh, t]
          - V[g, ahs, alpha[bsh, t]] - V[h, s, t]) % D
    return r1, r2, r3


if HAVE_NUMBA:

    @njit(cache=True)
    def _cocycle_residuals_numba(alpha, beta, m1, m2, U, V, D):
        n1, n2 = alpha.shape
        r1 = np.zeros((n1, n1, n1, n2), dtype=np.int64)
        r2 = np.zeros((n1, n2, n2, n2), dtype=np.int64)
        r3 = np.zeros((n1, n1, n2, n2), dtype=np.int64)
        for g in range(n1):
            for h in range(n1):
                for k in range(n1):
                    for s in range(n2):
                        v = (U[g, h, alpha[k, s]] + U[m1[g, h], k, s]
                             - U[h, k, s] - U[g, m1[h, k], s])
                        r1[g, h, k, s] = v % D
        for g in range(n1):
            for s in range(n2):
                for t in range(n2):
                    for r in range(n2):
                        v = (V[beta[s, g], t, r] + V[g, s, m2[r, t]]
                             - V[g, s, t] - V[g, m2[t, s], r])
                        r2[g, s, t, r] = v % D
        for g in range(n1):
            for h in range(n1):
                for s in range(n2):
                    ahs = alpha[h, s]
                    bsh = beta[s, h]
                    for t in range(n2):
                        v = (V[m1[g, h], s, t] - U[g, h, m2[t, s]] + U[g, h, s]
                             + U[beta[ahs, g], bsh, t] - V[g, ahs, alpha[bsh, t]] - V[h, s, t])
                        r3[g, h, s, t] = v % D
        return r1, r2, r3


def cocycle_residuals(alpha, beta, m1, m2, U, V, D):
    """Residual tables (mod ``D``) of the three cocycle equations.

    Shapes: ``(g,h,k,s)``, ``(g,s,t,r)`` and ``(g,h,s,t)``.  A zero table
    means the equation holds at every argument tuple.
    """
    args = tuple(np.ascontiguousarray(x, dtype=np.int64) for x in (alpha, beta, m1, m2, U, V))
    if USE_NUMBA:
        return _cocycle_residuals_numba(*args, np.int64(D))
    return _cocycle_residuals_numpy(*args, int(D))


# ---------------------------------------------------------------------------
# pentagon on n^3 basis states


def _pentagon_numpy(perm, phase, n, D):
    """Return (lhs_perm, lhs_phase, rhs_perm, rhs_phase) over all n^3 states."""
    P = perm.reshape(n, n)
    Ph = phase.reshape(n, n)
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()

    # left side: W12 W13 W23 applied right to left
    acc = Ph[y, z].copy()
    q = P[y, z]
    y1, z1 = q // n, q % n
    acc += Ph[x, z1]
    q = P[x, z1]
    x2, z2 = q // n, q % n
    acc += Ph[x2, y1]
    q = P[x2, y1]
    x3, y3 = q // n, q % n
    lhs = (x3 * n + y3) * n + z2
    lhs_ph = acc % D

    # right side: W23 W12
    acc = Ph[x, y].copy()
    q = P[x, y]
    x1, y1 = q // n, q % n
    acc += Ph[y1, z]
    q = P[y1, z]
    rhs = (x1 * n + q // n) * n + q % n
    rhs_ph = acc % D
    return lhs, lhs_ph, rhs, rhs_ph


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _pentagon_numba(perm, phase, n, D):
        N3 = n * n * n
        lhs = np.empty(N3, dtype=np.int64)
        lhs_ph = np.empty(N3, dtype=np.int64)
        rhs = np.empty(N3, dtype=np.int64)
        rhs_ph = np.empty(N3, dtype=np.int64)
        for v in prange(N3):
            x = v // (n * n)
            y = (v // n) % n
            z = v % n
            acc = phase[y * n + z]
            q = perm[y * n + z]
            y1 = q // n
            z1 = q % n
            acc += phase[x * n + z1]
            q = perm[x * n + z1]
            x2 = q // n
            z2 = q % n
            acc += phase[x2 * n + y1]
            q = perm[x2 * n + y1]
            lhs[v] = q * n + z2
            lhs_ph[v] = acc % D
            acc = phase[x * n + y]
            q = perm[x * n + y]
            x1 = q // n
            y1 = q % n
            acc += phase[y1 * n + z]
            q = perm[y1 * n + z]
            rhs[v] = (x1 * n + q // n) * n + q % n
            rhs_ph[v] = acc % D
        return lhs, lhs_ph, rhs, rhs_ph


def pentagon_sides(perm, phase, n, D):
    """Both sides of ``W12 W13 W23 = W23 W12`` as (perm, phase) arrays on ``n^3`` states.

    ``perm``/``phase`` describe ``W e_i = exp(2 pi i phase[i]/D) e_perm[i]`` on
    ``n^2`` states.
    """
    perm = np.ascontiguousarray(perm, dtype=np.int64)
    phase = np.ascontiguousarray(phase, dtype=np.int64)
    if USE_NUMBA:
        return _pentagon_numba(perm, phase, np.int64(n), np.int64(D))
    return _pentagon_numpy(perm, phase, int(n), int(D))


# ---------------------------------------------------------------------------
# the pointwise identity for Theta


def _mu_numpy(theta, alpha, beta, m1, m2, inv1, D):
    n1, n2 = alpha.shape
    sh = (n1, n2, n1, n2, n1, n2)
    g, s, h, t, k, r = np.indices(sh, sparse=True)
    bsg = beta[s, g]
    u = m2[alpha[h, t], alpha[g, s]]  # alpha_h(t) alpha_g(s)
    ginv = inv1[g]
    x = m1[inv1[bsg], h]  # beta_s(g)^{-1} h
    lhs = (theta[g, s, h, t]
           + theta[g, alpha[ginv, u], k, r]
           + theta[x, t, m1[beta[u, ginv], k], r])
    y = m1[inv1[beta[t, h]], k]
    rhs = theta[h, t, k, r] + theta[g, s, h, m2[alpha[y, r], t]]
    return np.broadcast_to((lhs - rhs) % D, sh)


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _mu_numba(theta, alpha, beta, m1, m2, inv1, D):
        n1, n2 = alpha.shape
        out = np.zeros((n1, n2, n1, n2, n1, n2), dtype=np.int64)
        for g in prange(n1):
            ginv = inv1[g]
            for s in range(n2):
                bsg = beta[s, g]
                for h in range(n1):
                    x = m1[inv1[bsg], h]
                    for t in range(n2):
                        u = m2[alpha[h, t], alpha[g, s]]
                        a2 = alpha[ginv, u]
                        bu = beta[u, ginv]
                        bth = inv1[beta[t, h]]
                        for k in range(n1):
                            y = m1[bth, k]
                            kk = m1[bu, k]
                            for r in range(n2):
                                lhs = theta[g, s, h, t] + theta[g, a2, k, r] + theta[x, t, kk, r]
                                rhs = theta[h, t, k, r] + theta[g, s, h, m2[alpha[y, r], t]]
                                out[g, s, h, t, k, r] = (lhs - rhs) % D
        return out


def mu_residuals(theta, alpha, beta, m1, m2, inv1, D):
    """Residual (mod ``D``) of the pointwise identity for the phase ``theta[g,s,h,t]``."""
    args = tuple(np.ascontiguousarray(a, dtype=np.int64) for a in (theta, alpha, beta, m1, m2, inv1))
    if USE_NUMBA:
        return _mu_numba(*args, np.int64(D))
    return _mu_numpy(*args, int(D))
