import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qgext import continuous_verify as cv

pos = st.floats(0.2, 5.0)
real = st.floats(-3.0, 3.0)
nonzero = st.floats(0.1, 4.0).flatmap(lambda x: st.sampled_from([x, -x]))
LAM = 4.0 / math.pi


# ---------------------------------------------------------------- ax+b


@given(nonzero)
def test_axb_unit_laws(s):
    assume(abs(s) > 1e-3)
    assert cv.axb_alpha(1.0, s) == pytest.approx(s, rel=1e-15)
    assert cv.axb_beta(s, 1.0) == pytest.approx(1.0, rel=1e-15)


def test_axb_values_at_two_one():
    assert cv.axb_alpha(2.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert cv.axb_beta(1.0, 2.0) == pytest.approx(2.0, rel=1e-15)
    assert cv.axb_closed_forms(np.array([2.0]), np.array([1.0]))["nabla"][0] == pytest.approx(0.5, rel=1e-15)


@given(nonzero, nonzero, nonzero, nonzero)
@settings(max_examples=200)
def test_axb_action_identities_at_random_points(g, h, s, t):
    dens = [s * (g - 1) + 1, s * (h * g - 1) + 1, t * s * (g - 1) + 1, s * (h - 1) + 1]
    assume(all(abs(d) > 1e-2 for d in dens))
    a = cv.axb_alpha(g, s)
    assume(abs(a * (h - 1) + 1) > 1e-2 and abs(t * (cv.axb_beta(s, g) - 1) + 1) > 1e-2)
    res = cv.axb_lemma_residuals(np.array([g]), np.array([h]), np.array([s]), np.array([t]))
    assert max(res.values()) < 1e-9


def test_axb_example_suite():
    rep = cv.axb_example_check(samples=2000, seed=3)
    assert rep["ok"]
    assert max(rep["closed_form_max_rel_error"].values()) < 1e-12
    assert rep["self_duality_max_residual"] < 1e-10
    assert not rep["kac"] and rep["xi_max_deviation_from_1"] > 1e-3


# ---------------------------------------------------------------- SL(2,R)


@given(real)
def test_sl2_unit_laws(x):
    assert cv.sl2_alpha((1.0, 0.0), x) == pytest.approx(x, abs=1e-15)
    b = cv.sl2_beta(x, (1.0, 0.0))
    assert (float(b[0]), float(b[1])) == pytest.approx((1.0, 0.0), abs=1e-15)


def test_sl2_values_at_one_one_one():
    assert cv.sl2_alpha((1.0, 1.0), 1.0) == pytest.approx(0.5, rel=1e-15)
    b = cv.sl2_beta(1.0, (1.0, 1.0))
    assert (float(b[0]), float(b[1])) == pytest.approx((2.0, 1.0), rel=1e-15)
    cf = cv.sl2_closed_forms((np.array([1.0]), np.array([1.0])), np.array([1.0]))
    assert cf["delta_M_hat"][0] == pytest.approx(16.0, rel=1e-15)


def test_sl2_example_suite():
    rep = cv.sl2_example_check(samples=2000, seed=4)
    assert rep["ok"]
    assert rep["M_unimodular"] and not rep["dual_unimodular"]


# ---------------------------------------------------------------- functional equation


def test_star1_examples():
    pt = (2.0, 1.0, 3.0, 1.0, 2.0, 1.0)
    assert cv.star1_residual(cv.f_lambda(1.0), pt) < 1e-12
    assert cv.star1_residual(cv.trivial_solution(lambda a, b: a * b), pt) < 1e-12
    eps = 1e-3
    pert = cv.star1_residual(lambda a, b, c, d: cv.f_lambda(1.0)(a, b, c, d) + eps * b, pt)
    assert pert > 1e-5


@given(pos, real, pos, real, pos, real, st.floats(-5, 5))
@settings(max_examples=200)
def test_star1_holds_at_random_points(a, b, c, d, l, m, lam):
    pt = (a, b, c, d, l, m)
    scale = 1.0 + abs(lam) * (abs(b) + abs(d) + abs(m) + 1) * 50
    assert cv.star1_residual(cv.f_lambda(lam), pt) < 1e-12 * scale
    for B in cv.TRIVIAL_GENERATORS.values():
        assert cv.star1_residual(cv.trivial_solution(B), pt) < 1e-11 * (1 + abs(b) + abs(d)) ** 3


def test_star1_domain_error():
    with pytest.raises(cv.DomainError):
        cv.star1_residual(cv.f_lambda(1.0), (-1.0, 1.0, 1.0, 1.0, 1.0, 1.0))


def test_star1_suite():
    rep = cv.star1_check(samples=1000, seed=5)
    assert rep["ok"] and len(rep["max_residual"]) == 4


# ---------------------------------------------------------------- flow and principal values


@given(pos, real, pos, real, real)
@settings(max_examples=100)
def test_flow_integrand_closed_form(a, b, c, d, r):
    g, h = (a, b), (c, d)
    poles = cv.flow_poles(g, h)
    assume(all(abs(r - p) > 1e-3 for p in poles))
    direct = cv.flow_integrand_direct(LAM, g, h, np.array([r]))
    closed = cv.flow_integrand_closed(LAM, g, h, np.array([r]))
    assert abs(direct[0] - closed[0]) <= 1e-9 * (1 + abs(closed[0]))


@given(pos, real, pos, real, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
@settings(max_examples=100)
def test_flow_is_a_one_parameter_group(a, b, c, d, r, t):
    g, h = (a, b), (c, d)
    assume(all(abs(c + d * x) > 1e-2 for x in (r, t + r)))
    mid = cv.flow(g, h, r)
    assume(abs(mid[1][0] + mid[1][1] * t) > 1e-2)
    assert cv.flow_composition_residual(g, h, r, t) < 1e-8


@pytest.mark.parametrize("g, h, expected", [
    ((1.0, 1.0), (1.0, 1.0), 2 * math.pi),
    ((1.0, 1.0), (1.0, -0.5), -2 * math.pi),
])
def test_full_line_principal_values(g, h, expected):
    assert cv.pv_line_integral(LAM, g, h) == pytest.approx(expected, abs=1e-6)


def test_full_line_vanishes_when_b_is_zero():
    assert cv.pv_line_integral(LAM, (1.3, 0.0), (0.7, 2.0)) == 0.0


def test_full_line_rejects_degenerate_parameters():
    with pytest.raises(cv.DomainError):
        cv.pv_line_integral(LAM, (1.0, 1.0), (1.0, 0.0))


@pytest.mark.parametrize("g, h, lo, hi", [
    ((1.0, 1.0), (1.0, 1.0), -3.0, 3.0),
    ((0.8, -0.6), (1.3, 0.9), -4.0, 1.0),
    ((1.5, 0.4), (0.6, -1.2), -1.0, 5.0),
])
def test_folding_agrees_with_extrapolated_excision(g, h, lo, hi):
    F = cv._Integrand(LAM, g, h)
    fold = cv.pv_integral(F, lo, hi)[0]
    exc = cv.pv_excision_extrapolated(F, lo, hi)
    assert fold == pytest.approx(exc, abs=1e-4)


@given(st.floats(-100, 100))
def test_circular_distance_range(x):
    d = cv.circular_distance(x)
    assert 0.0 <= d <= math.pi + 1e-12
    assert cv.circular_distance(x + 2 * math.pi) == pytest.approx(d, abs=1e-9)


# ---------------------------------------------------------------- cocycle identity


def test_cocycle_identity_regular_and_crossing():
    regular, _ = cv.cocycle_bank(6, seed=11, crossing=False)
    crossing, _ = cv.cocycle_bank(6, seed=12, crossing=True)
    for cfg in regular + crossing:
        assert cv.cocycle_residual_mod2pi(LAM, *cfg) < 1e-6
    for cfg in crossing:
        raw = cv.cocycle_residual_mod2pi(1.0, *cfg, raw=True)
        jump = math.pi ** 2 / 2
        assert min(abs(raw - jump), abs(raw - (2 * math.pi - jump))) < 1e-6
        assert cv.cocycle_residual_mod2pi(1.0, *cfg) > 1.0


@pytest.mark.parametrize("n", [-2, -1, 0, 1, 2])
def test_quantized_couplings(n):
    crossing, _ = cv.cocycle_bank(4, seed=13, crossing=True)
    for cfg in crossing:
        assert cv.cocycle_residual_mod2pi(4.0 * n / math.pi, *cfg) < 1e-6


def test_bank_configurations_are_admissible_and_cross_the_blowup():
    bank, _ = cv.cocycle_bank(10, seed=2)
    for g, h, k, s in bank:
        assert cv.admissible(g, h, k, s)
        assert k[0] + k[1] * s < 0


def test_cocycle_example_suite():
    rep = cv.cocycle_example_check(n=1, samples=40, seed=9)
    assert rep["ok"]


# ---------------------------------------------------------------- infinitesimal data


def test_infinitesimal_constants():
    rep = cv.infinitesimal_check()
    assert rep["ok"] and rep["max_abs_error"] < 1e-4


@pytest.mark.parametrize("lam", [1.0, LAM, -2.5])
def test_mixed_derivatives(lam):
    xy, yx = cv.mixed_flow_derivatives(lam, 0.4)
    assert xy == pytest.approx(0.0, abs=1e-4)
    assert yx == pytest.approx(lam, abs=1e-4)


@pytest.mark.parametrize("n", [-1, 1, 2])
def test_chi_coefficient(n):
    assert cv.chi_coefficient(n) == pytest.approx(-4.0 * n / math.pi, abs=1e-4)
