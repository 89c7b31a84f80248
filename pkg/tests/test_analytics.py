import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xentangle.analytics import (
    filon_integral,
    fwhm,
    hyperbola_level,
    pwp_validity,
    quadratic_prefactor,
    quadratic_psi,
    ridge_slope,
    s_integral,
)
from xentangle.exceptions import ConvergenceError, PeakNotResolved, RidgeNotDetected
from xentangle.grid import BiphotonField, make_grid
from xentangle.phasematch import QuadraticParams

from oracles import brute_s_integral, fresnel_s_integral

PARAMS0 = QuadraticParams(delta0=0.0, omega0=5.2464e13, q0=60930.65)


# ---- quadratic model


def test_filon_exact_for_polynomial_amplitude():
    a = 7.3
    got = filon_integral(lambda u: u**2, a, np.array([1.0, 1.5, 2.0]))
    # int_1^2 u^2 e^{iau} du by parts
    def antider(u):
        return np.exp(1j * a * u) * (u**2 / (1j * a) + 2 * u / a**2 - 2 / (1j * a**3))
    assert got == pytest.approx(antider(2.0) - antider(1.0), rel=1e-13)


@pytest.mark.parametrize("h", [4.0, -4.0, 0.3, -0.3, 1e-2, -1e-2, 1e-4, 25.0])
def test_closed_form_at_zero_detuning(h):
    assert s_integral(h, 0.0) == pytest.approx(fresnel_s_integral(h), rel=1e-9)


@pytest.mark.parametrize("h, delta0", [(4.0, 0.0), (-0.3, 0.0), (0.01, 0.0), (2.0, -0.0923), (-1.0, 1.5)])
def test_against_brute_force_quadrature(h, delta0):
    assert s_integral(h, delta0) == pytest.approx(brute_s_integral(h, delta0), rel=1e-4)


def test_brute_force_cutoff_converges():
    # the Abel regularization converges as the damping goes to zero
    exact = fresnel_s_integral(0.5)
    errors = [abs(brute_s_integral(0.5, 0.0, damping=d, levels=1) - exact) for d in (0.08, 0.04, 0.02)]
    assert errors[0] > errors[1] > errors[2]


def test_constant_on_hyperboloids():
    levels = [-3.0, -0.2, 0.05, 0.7, 5.0]
    for h in levels:
        t = np.linspace(0, 60e-15, 8) + 1e-15
        if h > 0:
            r = np.sqrt((h + (PARAMS0.omega0 * t) ** 2)) / PARAMS0.q0
        else:
            r = np.linspace(0, 40e-6, 8)
            t = np.sqrt((PARAMS0.q0 * r) ** 2 - h) / PARAMS0.omega0
        vals = quadratic_psi(PARAMS0, r, t)
        assert np.max(np.abs(vals / vals[0] - 1)) < 1e-6
        assert np.allclose(quadratic_psi(PARAMS0, r, -t), vals, rtol=1e-12)


@pytest.mark.parametrize("sign", [1, -1])
def test_inverse_sqrt_divergence(sign):
    h = sign * np.logspace(-2, -4, 9)
    scaled = np.array([abs(s_integral(x, 0.0)) for x in h]) * np.sqrt(np.abs(h))
    assert np.ptp(scaled) / scaled.mean() < 0.05
    # the limit is 2 sqrt(pi)
    assert scaled[-1] == pytest.approx(2 * math.sqrt(math.pi), rel=0.02)


def test_asymptote_needs_floor():
    r = 10e-6
    t = PARAMS0.asymptote_slope * r
    with pytest.raises(ConvergenceError, match="H = 0"):
        quadratic_psi(PARAMS0, 0.0, 0.0)
    val, clamped = quadratic_psi(PARAMS0, np.array([r, 2 * r]), np.array([t, 0.0]),
                                 h_floor=1e-2, return_clamped=True)
    assert clamped.tolist() == [True, False]
    assert abs(val[0]) == pytest.approx(abs(quadratic_prefactor(PARAMS0) * s_integral(1e-2, 0.0)), rel=1e-9)


def test_convergence_failure_reports_estimate():
    with pytest.raises(ConvergenceError) as info:
        s_integral(3.0, 40.0, rtol=1e-15, max_refine=2)
    assert info.value.estimate is not None and info.value.bound is not None


def test_hyperbola_level_examples():
    p = PARAMS0
    assert hyperbola_level(p, 1e-5, p.asymptote_slope * 1e-5) == pytest.approx(0.0, abs=1e-12)
    assert hyperbola_level(p, 0.0, 7e-15) == pytest.approx(-(p.omega0 * 7e-15) ** 2)
    assert hyperbola_level(p, 3e-6, 5e-15) == hyperbola_level(p, 3e-6, -5e-15)
    assert hyperbola_level(p, 0.0, 0.0) == 0.0


# ---- FWHM


def test_fwhm_triangle():
    x = np.linspace(-3, 3, 6001)
    w = 0.8
    y = np.clip(1 - np.abs(x) / w, 0, None)
    assert fwhm(y, x).fwhm == pytest.approx(w, rel=1e-9)


def test_fwhm_gaussian():
    sigma = 2.0
    x = np.arange(-400, 401) * sigma / 20
    y = np.exp(-(x**2) / (2 * sigma**2))
    assert fwhm(y, x).fwhm == pytest.approx(2.3548 * sigma, rel=0.005)


def test_fwhm_rejects_ramp():
    x = np.linspace(0, 1, 100)
    with pytest.raises(PeakNotResolved, match="peak not resolved"):
        fwhm(x, x)


def test_fwhm_baseline_from_edges():
    x = np.linspace(-10, 10, 2001)
    y = 0.3 + np.exp(-(x**2) / 2)
    assert fwhm(y, x).fwhm == pytest.approx(2.3548, rel=1e-3)


@settings(max_examples=30)
@given(st.floats(min_value=1e-3, max_value=1e3))
def test_fwhm_scale_equivariant(scale):
    x = np.linspace(-5, 5, 501)
    y = 1 / (1 + x**2)
    assert fwhm(y, x * scale).fwhm == pytest.approx(scale * fwhm(y, x).fwhm, rel=1e-12)


# ---- X arms


def _synthetic_field(slope, width=3e-15):
    g = make_grid(256, 1024, 2e6, 2e15, 2.7e15)
    r = g.r_nodes[:, None]
    t = g.t_nodes[None, :]
    values = np.exp(-(((np.abs(t) - slope * r) / width) ** 2)) * (r < 150e-6)
    return BiphotonField(g, values.astype(complex))


@pytest.mark.parametrize("slope", [0.8e-9, 1.16e-9, 2.5e-9])
def test_ridge_slope_synthetic(slope):
    fit = ridge_slope(_synthetic_field(slope))
    assert fit.slope_positive == pytest.approx(slope, rel=0.01)
    assert fit.slope_negative == pytest.approx(slope, rel=0.01)


def test_ridge_not_detected_for_central_peak():
    g = make_grid(256, 1024, 2e6, 2e15, 2.7e15)
    blob = np.exp(-(g.r_nodes[:, None] / 5e-6) ** 2 - (g.t_nodes[None, :] / 10e-15) ** 2)
    with pytest.raises(RidgeNotDetected, match="ridge not detected"):
        ridge_slope(BiphotonField(g, blob.astype(complex)))


# ---- plane-wave-pump validity


def test_pwp_reference_scales(crystal):
    rep = pwp_validity(crystal, 1.0, 1.0)
    assert 150e-6 < rep.walkoff_shift < 600e-6
    assert 1e-12 < rep.gvm_delay < 4e-12
    assert rep.valid


def test_pwp_flags(crystal):
    rep = pwp_validity(crystal, 1e-2, 1e-9)
    assert rep.space_ok and rep.time_ok
    marginal = pwp_validity(crystal, 300e-6, 2e-12)
    assert not marginal.space_ok and not marginal.time_ok
    at_shift = pwp_validity(crystal, rep.walkoff_shift, 1.0)
    assert at_shift.ratio_space == pytest.approx(1.0) and not at_shift.space_ok
    assert set(rep.as_dict()) >= {"walkoff_shift_m", "gvm_delay_s", "ratio_space", "ratio_time", "valid"}


def test_pwp_linear_in_length(crystal):
    a = pwp_validity(crystal, 1.0, 1.0)
    b = pwp_validity(crystal.with_(length=3 * crystal.length), 1.0, 1.0)
    assert b.walkoff_shift == pytest.approx(3 * a.walkoff_shift, rel=1e-12)
    assert b.gvm_delay == pytest.approx(3 * a.gvm_delay, rel=1e-12)


def test_pwp_rejects_nonpositive(crystal):
    with pytest.raises(ValueError):
        pwp_validity(crystal, -1.0, 1.0)
