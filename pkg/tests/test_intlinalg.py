from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from qgext.intlinalg import (
    CircleKernel,
    determinant,
    invariant_factors,
    is_smith_form,
    matmul,
    smith_normal_form,
)

small_ints = st.integers(-6, 6)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m)))


def _sympy_factors(M):
    S = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    return sorted(abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0)


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_smith_form_certificate(M):
    S, L, R = smith_normal_form(M)
    assert is_smith_form(S)
    assert matmul(matmul(L, M), R) == S
    assert abs(determinant(L)) == 1
    assert abs(determinant(R)) == 1


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_invariant_factors_match_sympy(M):
    assert sorted(invariant_factors(M)) == _sympy_factors(M)


@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)))
@settings(max_examples=100, deadline=None)
def test_determinant_matches_sympy(M):
    assert determinant(M) == int(sympy.Matrix(M).det())


@pytest.mark.parametrize("M, factors", [
    ([[2, 0], [0, 3]], [1, 6]),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
    ([[0, 0], [0, 0]], []),
    ([[6]], [6]),
])
def test_known_smith_forms(M, factors):
    assert invariant_factors(M) == factors


def test_is_smith_form_rejects_bad_chain():
    assert not is_smith_form([[2, 0], [0, 3]])
    assert not is_smith_form([[1, 1], [0, 1]])
    assert not is_smith_form([[0, 0], [0, 1]])


@given(matrices(6, 6))
@settings(max_examples=120, deadline=None)
def test_circle_kernel_matches_dense_smith(M):
    rows = [{c: v for c, v in enumerate(r) if v} for r in M]
    ncols = len(M[0])
    K = CircleKernel(rows, ncols)
    dense = [d for d in invariant_factors(M) if d > 1]
    rank = len(invariant_factors(M))
    assert sorted(K.torsion) == sorted(dense)
    assert K.torus_rank == ncols - rank


@given(matrices(6, 6), st.data())
@settings(max_examples=80, deadline=None)
def test_circle_kernel_points_are_solutions(M, data):
    rows = [{c: v for c, v in enumerate(r) if v} for r in M]
    ncols = len(M[0])
    K = CircleKernel(rows, ncols)
    f = len(K.free_cols)
    y = []
    for i in range(f):
        d = K.diag[i]
        if d == 0:
            y.append(Fraction(data.draw(st.integers(0, 30)), 31))
        elif d > 1:
            y.append(Fraction(data.draw(st.integers(0, d - 1)), d))
        else:
            y.append(Fraction(0))
    x = K.point(y)
    for r in M:
        assert sum(v * xi for v, xi in zip(r, x)) % 1 == 0
