import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from xentangle.dispersion import Role, bundled_crystal, wave_number
from xentangle.exceptions import ConvergenceError
from xentangle.phasematch import (
    QuadraticParams,
    amplitude_from_mismatch,
    collinear_mismatch,
    degeneracy_angle,
    delta_pw,
    mismatch_field,
    phase_matched_q,
    quadratic_params,
    spectral_amplitude,
)


def test_mismatch_even_in_omega(crystal):
    q = np.linspace(0, 3e5, 7)[:, None]
    w = np.linspace(0, 1.2e15, 9)[None, :]
    assert np.array_equal(delta_pw(crystal, q, w), delta_pw(crystal, q, -w))


def test_mismatch_field_parity_on_symmetric_nodes(crystal):
    w = (np.arange(64) - 31.5) * 2e13
    field = mismatch_field(crystal, np.linspace(0, 4e5, 16), w)
    assert np.array_equal(field.values, field.values[:, ::-1])


def test_mismatch_decreases_with_q(crystal):
    q = np.linspace(0, 3e5, 50)
    for w in (0.0, 2e13, 5e13):
        assert np.all(np.diff(delta_pw(crystal, q, w)) < 0)


def test_degeneracy_angle(crystal):
    theta = degeneracy_angle(crystal)
    assert math.degrees(theta) == pytest.approx(33.436, abs=0.25)
    assert abs(collinear_mismatch(crystal, theta)) < 1e-6
    one = math.radians(1.0)
    assert collinear_mismatch(crystal, theta - one) * collinear_mismatch(crystal, theta + one) < 0
    assert degeneracy_angle(crystal, xtol=0.5e-14) == pytest.approx(theta, abs=1e-9)


def test_no_degenerate_matching_is_reported():
    crystal = bundled_crystal()
    # positive uniaxial variant: swap the two index laws
    swapped = crystal.with_(ordinary=crystal.extraordinary, extraordinary=crystal.ordinary)
    with pytest.raises(ConvergenceError, match="no collinear degenerate phase matching"):
        degeneracy_angle(swapped)


def test_bundled_cut_near_degeneracy(crystal, params):
    # 33.436 deg is 0.6 mdeg off the root of this data set: |delta0| ~ 0.1 rad
    assert abs(params.delta0) < 0.2
    assert params.delta0 == pytest.approx(collinear_mismatch(crystal))


def test_amplitude_special_values():
    assert amplitude_from_mismatch(0.0, 1e-3) == 1e-3
    assert abs(amplitude_from_mismatch(2 * np.pi, 1e-3)) < 1e-19
    assert amplitude_from_mismatch(np.nan, 1e-3) == 0


@given(st.floats(min_value=-1e4, max_value=1e4, allow_nan=False))
def test_amplitude_bounded_by_gain(x):
    v = amplitude_from_mismatch(x, 1e-3)
    assert abs(v) <= 1e-3 * (1 + 1e-15)
    if x != 0:
        assert abs(v) < 1e-3 or abs(x) < 1e-7


def test_amplitude_matches_integral_identity():
    # int_0^1 ds exp(i s p) = exp(i p/2) sinc(p/2)
    s = np.linspace(0, 1, 20001)
    for p in (0.3, 2.0, -7.5):
        integral = trapezoid(np.exp(1j * s * p), s)
        assert amplitude_from_mismatch(p, 1.0) == pytest.approx(integral, rel=1e-7)


def test_spectral_amplitude_phase_matched_point(crystal, params):
    w = 3e13
    q = phase_matched_q(crystal, w)
    assert abs(spectral_amplitude(crystal, params, q, w)) == pytest.approx(params.gain, rel=1e-12)


def test_quadratic_expansion_residual(crystal, params):
    ks = wave_number(crystal, Role.SIGNAL, 0.0)
    residuals = []
    for frac in (0.005, 0.01, 0.02, 0.05, 0.1):
        w = np.linspace(-frac * crystal.omega_s, frac * crystal.omega_s, 61)
        q = np.linspace(0, frac * ks, 61)
        full = mismatch_field(crystal, q, w).values
        quad = params.mismatch(q[:, None], w[None, :])
        residuals.append(np.abs(full - quad).max() / (full.max() - full.min()))
    assert residuals[2] <= 0.02
    assert all(a < b for a, b in zip(residuals, residuals[1:]))


def test_omega0_scaling_with_length(crystal):
    p1 = quadratic_params(crystal)
    p2 = quadratic_params(crystal.with_(length=2 * crystal.length))
    assert p2.omega0 == pytest.approx(p1.omega0 / math.sqrt(2), rel=1e-12)
    assert p2.q0 == pytest.approx(p1.q0 / math.sqrt(2), rel=1e-12)
    assert p1.q0 > 0


def test_frozen_quadratic_parameters(params):
    assert params.omega0 == pytest.approx(5.2464e13, rel=1e-4)
    assert params.q0 == pytest.approx(60930.65, rel=1e-6)
    assert params.asymptote_slope == pytest.approx(1.16139e-9, rel=1e-4)


def test_large_gain_warns():
    with pytest.warns(RuntimeWarning, match="low-gain"):
        QuadraticParams(delta0=0.0, omega0=1e13, q0=1e4, gain=0.5)


def test_evanescent_nodes_masked(crystal):
    k = wave_number(crystal, Role.SIGNAL, 0.0)
    field = mismatch_field(crystal, np.array([0.0, 0.5 * k, 1.01 * k]), np.array([-1e13, 1e13]))
    assert not field.propagating[2].any() and field.propagating[:2].all()
    assert np.isnan(field.values[2]).all()
    assert np.all(amplitude_from_mismatch(field.values)[2] == 0)


def test_delta0_override_shifts_field(crystal):
    q, w = np.linspace(0, 2e5, 5), np.linspace(-5e13, 5e13, 6)
    base = mismatch_field(crystal, q, w).values
    shifted = mismatch_field(crystal, q, w, delta0_override=0.0).values
    assert np.allclose(shifted - base, -collinear_mismatch(crystal), rtol=0, atol=1e-9)
    assert quadratic_params(crystal, delta0_override=0.0).delta0 == 0.0


def test_mismatch_field_deterministic(crystal):
    q, w = np.linspace(0, 2e5, 9), np.linspace(-5e13, 5e13, 8)
    assert np.array_equal(mismatch_field(crystal, q, w).values, mismatch_field(crystal, q, w).values)


def test_x_shaped_gain_ridge(crystal, params):
    # the |delta l| < pi ridge: one phase-matched q per frequency, growing with |w|
    # delta0 < 0 at this cut: the branches open at |w| = omega0 sqrt(-delta0)
    threshold = params.omega0 * math.sqrt(-params.delta0)
    assert np.isnan(phase_matched_q(crystal, 0.9 * threshold))
    w = np.linspace(1.1 * threshold, 1e15, 41)
    q_pm = np.array([phase_matched_q(crystal, x) for x in w])
    assert not np.isnan(q_pm).any()
    assert np.all(np.diff(q_pm) > 0)
    assert np.array_equal(q_pm, np.array([phase_matched_q(crystal, -x) for x in w]))
    # near the origin the branches follow the quadratic hyperbola
    small = w[1:4]
    quad = params.q0 * np.sqrt(params.delta0 + (small / params.omega0) ** 2)
    assert q_pm[1:4] == pytest.approx(quad, rel=0.02)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0, max_value=1.2e15))
def test_phase_matched_q_is_a_root(w):
    crystal = bundled_crystal()
    q = phase_matched_q(crystal, w)
    if np.isnan(q):
        assert delta_pw(crystal, 0.0, w) <= 0
    else:
        assert abs(delta_pw(crystal, q, w) * crystal.length) < 1e-6
