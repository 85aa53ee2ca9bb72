"""Cocycle pairs with values in Q/Z and the group of extensions.

Unknowns are the additive phases ``U(g,h,s)`` followed by ``V(g,s,t)``.
Three linear equation families (matrix ``A``) cut out the cocycles and the
coboundary map ``R -> (dU, dV)`` (matrix ``B``) gives the trivial ones.  The
group of extensions is the circle homology ``ker A / im B``; it is computed
as the Pontryagin dual of ``ker(B^T) / im(A^T)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np
from scipy import sparse

from . import kernels
from .intlinalg import CircleKernel, lcm, smith_normal_form, solve_echelon_rational
from .matched_pair import MatchedPair

__all__ = [
    "Phase",
    "CocyclePair",
    "AbelianInvariants",
    "CohomologyError",
    "cocycle_system",
    "extension_group",
    "is_cocycle",
    "are_cohomologous",
    "cocycle_representatives",
    "normalize_cocycle",
    "is_normalized",
    "coboundary",
    "smith_normal_form",
]


class CohomologyError(ValueError):
    pass


@dataclass(frozen=True)
class Phase:
    """An element ``numerator/denominator`` of Q/Z, stored reduced."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        d = int(self.denominator)
        if d <= 0:
            raise ValueError("denominator must be positive")
        n = int(self.numerator) % d
        g = gcd(n, d) or d
        object.__setattr__(self, "numerator", n // g)
        object.__setattr__(self, "denominator", d // g)

    @classmethod
    def of(cls, x) -> "Phase":
        f = Fraction(x)
        return cls(f.numerator, f.denominator)

    def __add__(self, other: "Phase") -> "Phase":
        return Phase.of(self.fraction + other.fraction)

    def __neg__(self) -> "Phase":
        return Phase(-self.numerator, self.denominator)

    def __sub__(self, other: "Phase") -> "Phase":
        return self + (-other)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def value(self) -> complex:
        return complex(np.exp(2j * np.pi * self.numerator / self.denominator))


@dataclass(frozen=True, eq=False)
class CocyclePair:
    """Phase tables ``U[g,h,s]/den`` and ``V[g,s,t]/den`` in Q/Z."""

    U: np.ndarray
    V: np.ndarray
    den: int = 1

    def __post_init__(self):
        d = int(self.den)
        if d <= 0:
            raise ValueError("denominator must be positive")
        U = np.asarray(self.U, dtype=np.int64) % d
        V = np.asarray(self.V, dtype=np.int64) % d
        U.setflags(write=False)
        V.setflags(write=False)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "den", d)

    @classmethod
    def trivial(cls, pair: MatchedPair) -> "CocyclePair":
        n1, n2 = pair.n1, pair.n2
        return cls(np.zeros((n1, n1, n2), np.int64), np.zeros((n1, n2, n2), np.int64), 1)

    def with_den(self, d: int) -> "CocyclePair":
        if d % self.den:
            raise ValueError("new denominator must be a multiple of the old one")
        k = d // self.den
        return CocyclePair(self.U * k, self.V * k, d)

    def reduced(self) -> "CocyclePair":
        g = gcd(int(np.gcd.reduce(self.U.ravel(), initial=0)), int(np.gcd.reduce(self.V.ravel(), initial=0)))
        g = gcd(g, self.den)
        if g <= 1:
            return self
        return CocyclePair(self.U // g, self.V // g, self.den // g)

    def __add__(self, other: "CocyclePair") -> "CocyclePair":
        d = lcm(self.den, other.den)
        a, b = self.with_den(d), other.with_den(d)
        return CocyclePair(a.U + b.U, a.V + b.V, d).reduced()

    def __neg__(self) -> "CocyclePair":
        return CocyclePair(-self.U, -self.V, self.den)

    def __sub__(self, other: "CocyclePair") -> "CocyclePair":
        return self + (-other)

    def equals(self, other: "CocyclePair") -> bool:
        d = lcm(self.den, other.den)
        a, b = self.with_den(d), other.with_den(d)
        return bool(np.array_equal(a.U, b.U) and np.array_equal(a.V, b.V))

    def u(self, g, h, s) -> Phase:
        return Phase(int(self.U[g, h, s]), self.den)

    def v(self, g, s, t) -> Phase:
        return Phase(int(self.V[g, s, t]), self.den)

    def vector(self) -> list[Fraction]:
        d = self.den
        return [Fraction(int(x), d) for x in np.concatenate([self.U.ravel(), self.V.ravel()])]

    @classmethod
    def from_vector(cls, pair: MatchedPair, x: Sequence[Fraction]) -> "CocyclePair":
        d = lcm(*[Fraction(v).denominator for v in x])
        ints = np.array([int((Fraction(v) * d) % d) for v in x], dtype=np.int64)
        n1, n2 = pair.n1, pair.n2
        nu = n1 * n1 * n2
        return cls(ints[:nu].reshape(n1, n1, n2), ints[nu:].reshape(n1, n2, n2), d).reduced()

    def to_json(self) -> dict:
        return {"denominator": self.den, "U": self.U.tolist(), "V": self.V.tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "CocyclePair":
        return cls(np.array(doc["U"], dtype=np.int64), np.array(doc["V"], dtype=np.int64),
                   int(doc["denominator"]))


@dataclass(frozen=True)
class AbelianInvariants:
    torus_rank: int
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(int(x) for x in self.invariant_factors)
        if any(f <= 1 for f in fs) or any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"invalid invariant factors {fs}")
        object.__setattr__(self, "invariant_factors", fs)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def torsion_order(self) -> int:
        return int(np.prod(self.invariant_factors, dtype=object)) if self.invariant_factors else 1

    def to_json(self) -> dict:
        return {"torus_rank": self.torus_rank, "invariant_factors": list(self.invariant_factors)}


# ---------------------------------------------------------------------------
# constraint matrices


@dataclass(frozen=True, eq=False)
class CocycleSystem:
    A: sparse.csr_matrix
    B: sparse.csr_matrix
    n1: int
    n2: int
    family_rows: tuple[int, int, int]

    @property
    def n_unknowns(self) -> int:
        return self.A.shape[1]

    def u_index(self, g, h, s):
        return (np.asarray(g) * self.n1 + h) * self.n2 + s

    def v_index(self, g, s, t):
        return self.n1 * self.n1 * self.n2 + (np.asarray(g) * self.n2 + s) * self.n2 + t

    def r_index(self, g, s):
        return np.asarray(g) * self.n2 + s


def _assemble(n_rows: int, n_cols: int, terms) -> sparse.csr_matrix:
    rows, cols, vals = [], [], []
    ridx = np.arange(n_rows)
    for sign, col in terms:
        col = np.broadcast_to(col, (n_rows,) if np.ndim(col) == 1 else col.shape).ravel()
        rows.append(ridx)
        cols.append(col)
        vals.append(np.full(n_rows, sign, dtype=np.int64))
    M = sparse.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(n_rows, n_cols), dtype=np.int64).tocsr()
    M.sum_duplicates()
    M.eliminate_zeros()
    return M


def cocycle_system(pair: MatchedPair) -> CocycleSystem:
    """Integer matrices of the cocycle equations and of the coboundary map.

    Rows of ``A`` run over ``(g,h,k,s)``, then ``(g,s,t,r)``, then
    ``(g,h,s,t)``, each block in lexicographic order.
    """
    n1, n2 = pair.n1, pair.n2
    m1, m2 = pair.G1.table, pair.G2.table
    a, b = pair.alpha, pair.beta
    nu = n1 * n1 * n2
    N = nu + n1 * n2 * n2

    def U(g, h, s):
        return (g * n1 + h) * n2 + s

    def V(g, s, t):
        return nu + (g * n2 + s) * n2 + t

    g, h, k, s = (x.ravel() for x in np.indices((n1, n1, n1, n2)))
    A1 = _assemble(len(g), N, [
        (1, U(g, h, a[k, s])), (1, U(m1[g, h], k, s)), (-1, U(h, k, s)), (-1, U(g, m1[h, k], s))])
    g, s, t, r = (x.ravel() for x in np.indices((n1, n2, n2, n2)))
    A2 = _assemble(len(g), N, [
        (1, V(b[s, g], t, r)), (1, V(g, s, m2[r, t])), (-1, V(g, s, t)), (-1, V(g, m2[t, s], r))])
    g, h, s, t = (x.ravel() for x in np.indices((n1, n1, n2, n2)))
    ahs, bsh = a[h, s], b[s, h]
    A3 = _assemble(len(g), N, [
        (1, V(m1[g, h], s, t)), (-1, U(g, h, m2[t, s])), (1, U(g, h, s)), (1, U(b[ahs, g], bsh, t)),
        (-1, V(g, ahs, a[bsh, t])), (-1, V(h, s, t))])
    A = sparse.vstack([A1, A2, A3], format="csr")

    K = n1 * n2

    def R(g, s):
        return g * n2 + s

    g, h, s = (x.ravel() for x in np.indices((n1, n1, n2)))
    BU = _assemble(len(g), K, [(1, R(h, s)), (1, R(g, a[h, s])), (-1, R(m1[g, h], s))])
    g, s, t = (x.ravel() for x in np.indices((n1, n2, n2)))
    BV = _assemble(len(g), K, [(1, R(g, s)), (1, R(b[s, g], t)), (-1, R(g, m2[t, s]))])
    B = sparse.vstack([BU, BV], format="csr")
    return CocycleSystem(A, B, n1, n2, (A1.shape[0], A2.shape[0], A3.shape[0]))


def _sparse_rows(M: sparse.csr_matrix) -> list[dict]:
    M = M.tocsr()
    out = []
    for r in range(M.shape[0]):
        lo, hi = M.indptr[r], M.indptr[r + 1]
        out.append({int(c): int(v) for c, v in zip(M.indices[lo:hi], M.data[lo:hi]) if v})
    return out


class _Gauge:
    """Unimodular change of unknowns ``x = P w`` splitting off the coboundaries.

    After the change, ``P^{-1} B`` is an echelon matrix supported on the
    rows ``pivots``; the remaining coordinates ``w[free]`` of a cocycle are
    a complete invariant of its class (they pair the cocycle with a basis
    of ``ker B^T``).
    """

    def __init__(self, B: sparse.csr_matrix):
        N, K = B.shape
        rows = _sparse_rows(B)
        col_rows: dict[int, set] = {}
        for i, r in enumerate(rows):
            for c in r:
                col_rows.setdefault(c, set()).add(i)
        P_cols = {}  # column p of P, sparse {row: coeff}; absent means e_p
        Pinv_rows = {}  # row i of P^{-1}, sparse; absent means e_i
        is_pivot = [False] * N
        self.pivot_rows: list[int] = []

        def get(d, k):
            return d.get(k) or {k: 1}

        def add_into(d, dst, src_vec, k):
            v = dict(get(d, dst))
            for key, val in src_vec.items():
                nv = v.get(key, 0) + k * val
                if nv:
                    v[key] = nv
                else:
                    v.pop(key, None)
            d[dst] = v

        def row_op(i, p, k):
            # row_i -= k * row_p on B; P column p += k * column i; P^{-1} row i -= k * row p
            ri, rp = rows[i], rows[p]
            for c, v in rp.items():
                nv = ri.get(c, 0) - k * v
                if nv:
                    if c not in ri:
                        col_rows[c].add(i)
                    ri[c] = nv
                else:
                    if c in ri:
                        del ri[c]
                        col_rows[c].discard(i)
            add_into(P_cols, p, get(P_cols, i), k)
            add_into(Pinv_rows, i, get(Pinv_rows, p), -k)

        for c in range(K):
            while True:
                live = [i for i in col_rows.get(c, ()) if not is_pivot[i]]
                if not live:
                    break
                p = min(live, key=lambda i: (abs(rows[i][c]), len(rows[i]), i))
                pv = rows[p][c]
                remaining = False
                for i in live:
                    if i == p:
                        continue
                    k = rows[i][c] // pv
                    row_op(i, p, k)
                    if rows[i].get(c, 0):
                        remaining = True
                if not remaining:
                    is_pivot[p] = True
                    self.pivot_rows.append(p)
                    break
        self.N, self.K = N, K
        self.is_pivot = is_pivot
        self.free = [i for i in range(N) if not is_pivot[i]]
        self.echelon = {p: dict(rows[p]) for p in self.pivot_rows}
        self.P_cols = P_cols
        self.Pinv_rows = Pinv_rows

    def P_col(self, j) -> dict:
        return self.P_cols.get(j) or {j: 1}

    def Pinv_row(self, i) -> dict:
        return self.Pinv_rows.get(i) or {i: 1}

    def P_rows(self, cols: Sequence[int]) -> dict:
        """Row-wise view of the submatrix ``P[:, cols]``: ``{row: {k: coeff}}``."""
        out: dict[int, dict] = {}
        for k, j in enumerate(cols):
            for r, v in self.P_col(j).items():
                out.setdefault(r, {})[k] = v
        return out

    def to_w(self, x: Sequence[Fraction], idx: Sequence[int]) -> list[Fraction]:
        return [sum((v * x[c] for c, v in self.Pinv_row(i).items()), Fraction(0)) for i in idx]

    def from_free(self, chi: Sequence[Fraction]) -> list[Fraction]:
        x = [Fraction(0)] * self.N
        for k, j in enumerate(self.free):
            if chi[k]:
                for r, v in self.P_col(j).items():
                    x[r] += v * chi[k]
        return [v % 1 for v in x]


class CohomologyData:
    """Everything derived from the constraint matrices of one matched pair."""

    def __init__(self, pair: MatchedPair):
        self.pair = pair
        self.system = cocycle_system(pair)
        self.gauge = _Gauge(self.system.B)
        free = self.gauge.free
        Pfree = self.gauge.P_rows(free)
        rows = []
        for r in _sparse_rows(self.system.A):
            out: dict[int, int] = {}
            for c, v in r.items():
                for k, pv in Pfree.get(c, {}).items():
                    nv = out.get(k, 0) + v * pv
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
            rows.append(out)
        self.kernel = CircleKernel(rows, len(free))

    @cached_property
    def invariants(self) -> AbelianInvariants:
        return AbelianInvariants(self.kernel.torus_rank, tuple(self.kernel.torsion))

    def class_of(self, c: CocyclePair) -> tuple[Fraction, ...]:
        """Complete class invariant of a cocycle: its free coordinates mod 1."""
        w = self.gauge.to_w(c.vector(), self.gauge.free)
        return tuple(v % 1 for v in w)

    def witness(self, c: CocyclePair) -> "np.ndarray | None":
        """Rational ``R`` with ``c = dR`` modulo 1, or ``None`` if ``c`` is not a coboundary."""
        x = c.vector()
        if any(v % 1 for v in self.gauge.to_w(x, self.gauge.free)):
            return None
        piv = self.gauge.pivot_rows
        rhs = self.gauge.to_w(x, piv)
        rows = [self.gauge.echelon[p] for p in piv]
        return solve_echelon_rational(rows, rhs, self.gauge.K)

    def representatives(self, d: int) -> list[CocyclePair]:
        """One cocycle per class of order dividing ``d``."""
        ker = self.kernel
        choices = []
        for i, order in ker.generators():
            if order == 0:
                choices.append([(i, Fraction(a, d)) for a in range(d)])
            else:
                step = order // gcd(order, d)
                choices.append([(i, Fraction(a, order)) for a in range(0, order, step)])
        f = len(ker.free_cols)
        reps = []
        for combo in _product(choices):
            y = [Fraction(0)] * f
            for i, val in combo:
                y[i] = val
            chi = ker.point(y)
            x = self.gauge.from_free(chi)
            reps.append(CocyclePair.from_vector(self.pair, x))
        return reps


def _product(lists):
    if not lists:
        yield ()
        return
    head, *tail = lists
    for x in head:
        for rest in _product(tail):
            yield (x,) + rest


def cohomology_data(pair: MatchedPair) -> CohomologyData:
    """Solved cocycle system of ``pair``, computed once and kept on the pair object."""
    hit = pair.__dict__.get("_cohomology")
    if hit is None:
        hit = CohomologyData(pair)
        object.__setattr__(pair, "_cohomology", hit)
    return hit


def extension_group(pair: MatchedPair) -> AbelianInvariants:
    return cohomology_data(pair).invariants


# ---------------------------------------------------------------------------
# cocycle-level operations


def is_cocycle(pair: MatchedPair, c: CocyclePair, max_witnesses: int = 5) -> dict:
    """Exact check of the three cocycle equations at every argument tuple."""
    r1, r2, r3 = kernels.cocycle_residuals(pair.alpha, pair.beta, pair.G1.table, pair.G2.table,
                                           c.U, c.V, c.den)
    violations = []
    for name, res, args in (("U-equation", r1, "g,h,k,s"), ("V-equation", r2, "g,s,t,r"),
                            ("mixed equation", r3, "g,h,s,t")):
        bad = np.argwhere(res != 0)
        if len(bad):
            violations.append({"equation": name, "arguments": args, "count": int(len(bad)),
                               "witnesses": bad[:max_witnesses].tolist()})
    return {"ok": not violations, "violations": violations}


def _require_cocycle(pair, c, label="input"):
    rep = is_cocycle(pair, c)
    if not rep["ok"]:
        raise CohomologyError(f"{label} is not a cocycle: {rep['violations'][0]}")


def coboundary(pair: MatchedPair, R: np.ndarray, den: int = 1) -> CocyclePair:
    """``(dR)_U(g,h,s) = R(h,s) + R(g,alpha_h(s)) - R(gh,s)`` and
    ``(dR)_V(g,s,t) = R(g,s) + R(beta_s(g),t) - R(g,ts)``, phases ``R/den``."""
    R = np.asarray(R, dtype=np.int64)
    n1, n2 = pair.n1, pair.n2
    m1, m2 = pair.G1.table, pair.G2.table
    g, h, s = np.indices((n1, n1, n2))
    U = R[h, s] + R[g, pair.alpha[h, s]] - R[m1[g, h], s]
    g, s, t = np.indices((n1, n2, n2))
    V = R[g, s] + R[pair.beta[s, g], t] - R[g, m2[t, s]]
    return CocyclePair(U, V, den).reduced()


def rational_table_to_ints(R: Sequence[Fraction], n1: int, n2: int) -> tuple[np.ndarray, int]:
    d = lcm(*[Fraction(v).denominator for v in R])
    arr = np.array([int((Fraction(v) * d) % d) for v in R], dtype=np.int64).reshape(n1, n2)
    return arr, d


def are_cohomologous(pair: MatchedPair, c1: CocyclePair, c2: CocyclePair, check: bool = True):
    """Decide whether ``c1 - c2`` is a coboundary.

    Returns ``(flag, witness)`` where ``witness`` is ``(R, den)`` with
    ``c1 = c2 + coboundary(R/den)`` when ``flag`` is true, else ``None``.
    """
    if check:
        _require_cocycle(pair, c1, "first cocycle")
        _require_cocycle(pair, c2, "second cocycle")
    data = cohomology_data(pair)
    y = data.witness(c1 - c2)
    if y is None:
        return False, None
    return True, rational_table_to_ints(y, pair.n1, pair.n2)


def cocycle_representatives(pair: MatchedPair, d: int) -> list[CocyclePair]:
    """One normalized cocycle for each class of the group of extensions whose order divides ``d``.

    The first entry is always the trivial class.  A warning is issued when
    ``d`` is not a multiple of the exponent of the torsion part, since the
    higher-order classes are then not listed.
    """
    if d < 1:
        raise ValueError("d must be positive")
    data = cohomology_data(pair)
    inv = data.invariants
    if d % inv.exponent:
        warnings.warn(f"d = {d} is not a multiple of the torsion exponent {inv.exponent}; "
                      "classes of higher order are omitted", stacklevel=2)
    return [normalize_cocycle(pair, c, check=False) for c in data.representatives(d)]


def normalize_cocycle(pair: MatchedPair, c: CocyclePair, check: bool = True) -> CocyclePair:
    """Cohomologous cocycle vanishing whenever an argument is the identity.

    The correcting function is ``R(e,s) = -U(e,e,s)`` and
    ``R(g,e) = -V(g,e,e)`` (the two prescriptions agree at ``(e,e)`` for a
    cocycle), zero elsewhere.  Afterwards ``U(g,e,s) = U(e,g,s) = U(g,h,e) = 0``
    and ``V(e,s,t) = V(g,e,t) = V(g,s,e) = 0``.
    """
    if check:
        _require_cocycle(pair, c)
    R = np.zeros((pair.n1, pair.n2), dtype=np.int64)
    R[0, :] = -c.U[0, 0, :]
    R[:, 0] = -c.V[:, 0, 0]
    out = (c + coboundary(pair, R, c.den)).reduced()
    return out


def is_normalized(c: CocyclePair) -> bool:
    return bool(not c.U[:, 0, :].any() and not c.U[0, :, :].any() and not c.U[:, :, 0].any()
                and not c.V[0].any() and not c.V[:, 0, :].any() and not c.V[:, :, 0].any())
