"""Exact integer linear algebra on Python ints.

``smith_normal_form`` is the dense reference algorithm.  ``CircleKernel``
solves ``C x = 0`` over the circle group ``R/Z`` for large sparse integer
matrices: unit pivots are eliminated sparsely first, and only the small
residual block goes through the dense Smith form.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntMatrix = list  # list of rows, each a list of Python ints


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] if Bt else [0] * cols for row in A]


def determinant(M: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def smith_normal_form(M: Sequence[Sequence[int]], want_left: bool = True, want_right: bool = True):
    """Smith normal form ``S = L M R`` with ``L``, ``R`` unimodular.

    Returns ``(S, L, R)``; ``L`` or ``R`` is ``None`` when not requested.
    The diagonal of ``S`` is non-negative and forms a divisibility chain.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    L = identity(m) if want_left else None
    R = identity(n) if want_right else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if L is not None:
            L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if R is not None:
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        if k:
            rs, rd = A[src], A[dst]
            for c in range(n):
                if rs[c]:
                    rd[c] += k * rs[c]
            if L is not None:
                ls, ld = L[src], L[dst]
                for c in range(m):
                    if ls[c]:
                        ld[c] += k * ls[c]

    def add_col(dst, src, k):  # col dst += k * col src
        if k:
            for row in A:
                if row[src]:
                    row[dst] += k * row[src]
            if R is not None:
                for row in R:
                    if row[src]:
                        row[dst] += k * row[src]

    def neg_row(i):
        A[i] = [-x for x in A[i]]
        if L is not None:
            L[i] = [-x for x in L[i]]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(i, t, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(j, t, -q)
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: every remaining entry must be a multiple of p
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            neg_row(t)
        t += 1
    return A, L, R


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    S, _, _ = smith_normal_form(M, want_left=False, want_right=False)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i] != 0]


def is_smith_form(S: Sequence[Sequence[int]]) -> bool:
    m = len(S)
    n = len(S[0]) if m else 0
    diag = []
    for i in range(m):
        for j in range(n):
            if i != j and S[i][j] != 0:
                return False
    for i in range(min(m, n)):
        if S[i][i] < 0:
            return False
        diag.append(S[i][i])
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a != 0 and b % a != 0:
            return False
    return True


class CircleKernel:
    """Solution group of ``C x = 0`` for ``x`` in ``(R/Z)^ncols``.

    ``rows`` is an iterable of sparse rows ``{col: coeff}``.  The solution
    group is ``T^torus_rank`` times ``Z/s_1 + ... + Z/s_k``; ``point``
    turns coordinates in that decomposition into an explicit solution.
    """

    def __init__(self, rows: Iterable[dict], ncols: int):
        self.ncols = ncols
        active: dict[int, dict] = {}
        seen = set()
        for r in rows:
            r = {c: int(v) for c, v in r.items() if v}
            if not r:
                continue
            key = tuple(sorted(r.items()))
            first = key[0][1]
            neg = tuple((c, -v) for c, v in key)
            if key in seen or neg in seen:
                continue
            seen.add(key if first > 0 else neg)
            active[len(active)] = r
        col_rows: dict[int, set] = {}
        for rid, r in active.items():
            for c in r:
                col_rows.setdefault(c, set()).add(rid)

        heap = [(len(r), rid) for rid, r in active.items() if any(abs(v) == 1 for v in r.values())]
        heapq.heapify(heap)
        self.pivots: list[tuple[int, int, dict]] = []
        eliminated = set()
        while heap:
            ln, rid = heapq.heappop(heap)
            r = active.get(rid)
            if r is None or len(r) != ln:
                continue
            units = [c for c, v in r.items() if abs(v) == 1]
            if not units:
                continue
            c = min(units, key=lambda col: (len(col_rows[col]), col))
            u = r[c]
            del active[rid]
            for cc in r:
                col_rows[cc].discard(rid)
            self.pivots.append((c, u, dict(r)))
            eliminated.add(c)
            for oid in list(col_rows[c]):
                o = active[oid]
                k = o[c] * u
                for cc, v in r.items():
                    nv = o.get(cc, 0) - k * v
                    if nv:
                        if cc not in o:
                            col_rows[cc].add(oid)
                        o[cc] = nv
                    elif cc in o:
                        del o[cc]
                        col_rows[cc].discard(oid)
                if not o:
                    del active[oid]
                elif any(abs(v) == 1 for v in o.values()):
                    heapq.heappush(heap, (len(o), oid))
            col_rows[c] = set()

        self.free_cols = [c for c in range(ncols) if c not in eliminated]
        pos = {c: k for k, c in enumerate(self.free_cols)}
        f = len(self.free_cols)
        residual = []
        for r in active.values():
            row = [0] * f
            for c, v in r.items():
                row[pos[c]] = v
            residual.append(row)
        self.residual_rows = len(residual)
        residual = _row_reduce(residual, f)
        if residual:
            S, _, R = smith_normal_form(residual, want_left=False)
            diag = [S[i][i] if i < len(S) else 0 for i in range(f)]
        else:
            R = identity(f)
            diag = [0] * f
        self.R = R
        self.diag = diag

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diag if d > 1]

    @property
    def torus_rank(self) -> int:
        return sum(1 for d in self.diag if d == 0)

    def generators(self) -> list[tuple[int, int]]:
        """``(coordinate, order)`` for each torsion generator; order 0 marks a torus direction."""
        return [(i, d) for i, d in enumerate(self.diag) if d != 1]

    def point(self, y: Sequence[Fraction]) -> list[Fraction]:
        """Solution with residual coordinates ``y`` (one entry per free column).

        Entries of ``y`` at torsion coordinates must be multiples of
        ``1/diag``; entries at unit coordinates are ignored (forced to 0).
        """
        f = len(self.free_cols)
        yy = [Fraction(0) if self.diag[i] == 1 else Fraction(y[i]) for i in range(f)]
        x = [Fraction(0)] * self.ncols
        for a, c in enumerate(self.free_cols):
            row = self.R[a]
            x[c] = sum((row[b] * yy[b] for b in range(f) if row[b]), Fraction(0)) % 1
        for c, u, r in reversed(self.pivots):
            acc = Fraction(0)
            for cc, v in r.items():
                if cc != c:
                    acc += v * x[cc]
            x[c] = (-u * acc) % 1
        return x


def _row_reduce(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer row echelon form (same row lattice); drops zero rows."""
    rows = [list(r) for r in rows if any(r)]
    out = []
    for c in range(ncols):
        live = [r for r in rows if r[c]]
        rest = [r for r in rows if not r[c]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[c] // p[c]
                r2 = [a - q * b for a, b in zip(r, p)]
                if r2[c]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            live = nxt
        if live:
            out.append(live[0])
        rows = rest
    return out


def solve_echelon_rational(rows: list[dict], rhs: list[Fraction], ncols: int) -> list[Fraction]:
    """Solve an upper-echelon sparse system exactly; non-pivot unknowns set to 0.

    ``rows[k]`` must have its leading (smallest) column strictly increasing in ``k``.
    """
    y = [Fraction(0)] * ncols
    for row, b in sorted(zip(rows, rhs), key=lambda rb: -min(rb[0])):
        lead = min(row)
        acc = Fraction(b)
        for c, v in row.items():
            if c != lead:
                acc -= v * y[c]
        y[lead] = acc / row[lead]
    return y


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        x = abs(int(x))
        if x:
            out = out * x // gcd(out, x)
    return out
