import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgext.cyclo import CycloArray, cyclotomic_coeffs, identity

orders = st.sampled_from([1, 2, 3, 4, 6, 8, 12])


def arrays(D, shape):
    n = int(np.prod(shape)) * D
    return st.lists(st.integers(-3, 3), min_size=n, max_size=n).map(
        lambda v: CycloArray(np.array(v, dtype=np.int64).reshape(shape + (D,)), D))


@st.composite
def pairs_of_arrays(draw, shape=(3, 3)):
    D1, D2 = draw(orders), draw(orders)
    return draw(arrays(D1, shape)), draw(arrays(D2, shape))


@pytest.mark.parametrize("D, coeffs", [
    (1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)), (8, (1, 0, 0, 0, 1)),
])
def test_small_cyclotomic_polynomials(D, coeffs):
    assert cyclotomic_coeffs(D) == coeffs


@given(pairs_of_arrays())
@settings(max_examples=80, deadline=None)
def test_arithmetic_agrees_with_complex_evaluation(ab):
    a, b = ab
    za, zb = a.to_complex(), b.to_complex()
    np.testing.assert_allclose((a + b).to_complex(), za + zb, atol=1e-9)
    np.testing.assert_allclose((a - b).to_complex(), za - zb, atol=1e-9)
    np.testing.assert_allclose((a @ b).to_complex(), za @ zb, atol=1e-9)
    np.testing.assert_allclose(a.mul(b).to_complex(), za * zb, atol=1e-9)
    np.testing.assert_allclose(a.adjoint().to_complex(), za.conj().T, atol=1e-9)


@given(orders.flatmap(lambda D: arrays(D, (4,))))
@settings(max_examples=80, deadline=None)
def test_canonical_form_detects_zero_exactly(a):
    z = a.to_complex()
    assert a.is_zero() == bool(np.all(np.abs(z) < 1e-9))


@given(orders.flatmap(lambda D: arrays(D, (2, 2))), st.sampled_from([1, 2, 3]))
@settings(max_examples=50, deadline=None)
def test_lift_preserves_values(a, k):
    b = a.lift(a.D * k)
    assert b.equals(a)
    np.testing.assert_allclose(b.to_complex(), a.to_complex(), atol=1e-9)


def test_sum_of_all_roots_is_zero():
    for D in (2, 3, 5, 6, 12):
        a = CycloArray(np.ones((D,), dtype=np.int64), D)
        assert a.is_zero()


def test_from_phases_and_identity():
    a = CycloArray.from_phases(np.array([[0, 1], [2, 3]]), 4, mask=np.array([[1, 0], [0, 1]], bool))
    np.testing.assert_allclose(a.to_complex(), np.array([[1, 0], [0, -1j]]), atol=1e-12)
    assert (identity(2, 4) @ a).equals(a)


def test_lift_to_non_multiple_is_rejected():
    with pytest.raises(ValueError):
        CycloArray.zeros((1,), 4).lift(6)
