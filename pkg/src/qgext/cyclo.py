"""Exact arrays over the cyclotomic integers Z[zeta_D].

An element is stored as its coefficient vector on ``1, zeta, ..., zeta^(D-1)``.
This representation is redundant; ``canonical`` reduces modulo the
cyclotomic polynomial so that equality tests are exact.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy


@lru_cache(maxsize=None)
def cyclotomic_coeffs(D: int) -> tuple[int, ...]:
    """Coefficients of the D-th cyclotomic polynomial, lowest degree first."""
    x = sympy.Symbol("x")
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(D, x), x).all_coeffs()))


class CycloArray:
    """An ndarray of elements of Z[zeta_D]; the last axis holds coefficients."""

    __slots__ = ("c", "D")

    def __init__(self, coeffs: np.ndarray, D: int):
        self.c = np.asarray(coeffs, dtype=np.int64)
        self.D = int(D)
        if self.c.shape[-1] != self.D:
            raise ValueError("last axis must have length D")

    @classmethod
    def zeros(cls, shape, D: int) -> "CycloArray":
        return cls(np.zeros(tuple(shape) + (D,), dtype=np.int64), D)

    @classmethod
    def from_phases(cls, num: np.ndarray, D: int, mask: np.ndarray | None = None) -> "CycloArray":
        """Array with entry ``zeta^num`` where ``mask`` is true and 0 elsewhere."""
        num = np.asarray(num, dtype=np.int64) % D
        out = np.zeros(num.shape + (D,), dtype=np.int64)
        if mask is None:
            mask = np.ones(num.shape, dtype=bool)
        idx = np.nonzero(mask)
        out[idx + (num[idx],)] = 1
        return cls(out, D)

    @classmethod
    def from_ints(cls, a: np.ndarray, D: int = 1) -> "CycloArray":
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros(a.shape + (D,), dtype=np.int64)
        out[..., 0] = a
        return cls(out, D)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.c.shape[:-1]

    def lift(self, D: int) -> "CycloArray":
        if D % self.D:
            raise ValueError("can only lift to a multiple of the order")
        k = D // self.D
        out = np.zeros(self.shape + (D,), dtype=np.int64)
        out[..., ::k] = self.c
        return CycloArray(out, D)

    def _common(self, other: "CycloArray"):
        D = np.lcm(self.D, other.D)
        return self.lift(D), other.lift(D)

    def __add__(self, other: "CycloArray") -> "CycloArray":
        a, b = self._common(other)
        return CycloArray(a.c + b.c, a.D)

    def __sub__(self, other: "CycloArray") -> "CycloArray":
        a, b = self._common(other)
        return CycloArray(a.c - b.c, a.D)

    def __neg__(self) -> "CycloArray":
        return CycloArray(-self.c, self.D)

    def scale_int(self, k: int) -> "CycloArray":
        return CycloArray(self.c * int(k), self.D)

    def __matmul__(self, other: "CycloArray") -> "CycloArray":
        a, b = self._common(other)
        D = a.D
        out = np.zeros(a.shape[:-1] + b.shape[-1:] + (D,), dtype=np.int64)
        nz_a = [i for i in range(D) if a.c[..., i].any()]
        nz_b = [j for j in range(D) if b.c[..., j].any()]
        for i in nz_a:
            for j in nz_b:
                out[..., (i + j) % D] += a.c[..., i] @ b.c[..., j]
        return CycloArray(out, D)

    def mul(self, other: "CycloArray") -> "CycloArray":
        """Entrywise product (broadcasting)."""
        a, b = self._common(other)
        D = a.D
        shape = np.broadcast_shapes(a.shape, b.shape)
        out = np.zeros(shape + (D,), dtype=np.int64)
        for i in range(D):
            if not a.c[..., i].any():
                continue
            for j in range(D):
                if b.c[..., j].any():
                    out[..., (i + j) % D] += a.c[..., i] * b.c[..., j]
        return CycloArray(out, D)

    def conj(self) -> "CycloArray":
        idx = (-np.arange(self.D)) % self.D
        return CycloArray(self.c[..., idx], self.D)

    def transpose(self) -> "CycloArray":
        return CycloArray(np.swapaxes(self.c, 0, 1), self.D)

    def adjoint(self) -> "CycloArray":
        return self.conj().transpose()

    def __getitem__(self, key) -> "CycloArray":
        if not isinstance(key, tuple):
            key = (key,)
        return CycloArray(self.c[key + (slice(None),)], self.D)

    def canonical(self) -> np.ndarray:
        """Coefficients in the power basis of Q(zeta_D), length phi(D)."""
        phi = cyclotomic_coeffs(self.D)
        deg = len(phi) - 1
        c = self.c.copy()
        for k in range(self.D - 1, deg - 1, -1):
            lead = c[..., k].copy()
            if not lead.any():
                continue
            for m, pm in enumerate(phi):
                if pm:
                    c[..., k - deg + m] -= lead * pm
        return c[..., :deg]

    def equals(self, other: "CycloArray") -> bool:
        a, b = self._common(other)
        if a.shape != b.shape:
            return False
        return bool(np.array_equal((a - b).canonical(), np.zeros(a.shape + (len(cyclotomic_coeffs(a.D)) - 1,))))

    def is_zero(self) -> bool:
        return not self.canonical().any()

    def to_complex(self) -> np.ndarray:
        z = np.exp(2j * np.pi * np.arange(self.D) / self.D)
        return self.c @ z


def identity(n: int, D: int = 1) -> CycloArray:
    return CycloArray.from_ints(np.eye(n, dtype=np.int64), D)
