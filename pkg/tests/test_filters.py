import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.constants import c

from xentangle.biphoton import near_field
from xentangle.filters import AngularFilter, SpectralFilter, apply_angular, apply_spectral
from xentangle.pipeline import build_grid, compute_amplitude, temporal_fwhm

from conftest import FROZEN_BANDWIDTH


@given(st.floats(min_value=-5e15, max_value=5e15))
def test_transmission_range_and_symmetry(w):
    f = SpectralFilter(FROZEN_BANDWIDTH)
    t = f.transmission(w)
    assert 0 <= t <= 1
    assert t == f.transmission(-w)


def test_transmission_values():
    f = SpectralFilter(2.0, order=8, center_offset=1.0)
    assert f.transmission(1.0) == 1.0
    assert f.transmission(3.0) == pytest.approx(np.exp(-1))


@pytest.mark.parametrize("kwargs", [dict(bandwidth=1.0, order=3), dict(bandwidth=1.0, order=0),
                                    dict(bandwidth=0.0), dict(bandwidth=-1.0)])
def test_bad_spectral_filters(kwargs):
    with pytest.raises(ValueError):
        SpectralFilter(**kwargs)


def test_bad_angular_filters():
    with pytest.raises(ValueError):
        AngularFilter(0.0)
    with pytest.raises(ValueError):
        AngularFilter(0.1, mapping="internal")


def test_all_pass_limits(small_amplitude):
    assert apply_spectral(small_amplitude, SpectralFilter(np.inf)) is small_amplitude
    wide = apply_spectral(small_amplitude, SpectralFilter(1e30))
    assert np.max(np.abs(wide.values - small_amplitude.values)) <= 1e-12 * np.abs(small_amplitude.values).max()
    assert apply_angular(small_amplitude, AngularFilter(np.pi / 2)) is small_amplitude
    g = small_amplitude.grid
    # wider than the whole angular spectrum of the grid
    alpha = np.arcsin(min(1.0, g.q_max * c / (g.carrier - g.omega_max))) * 1.0001
    wide = apply_angular(small_amplitude, AngularFilter(min(alpha, np.pi / 2)))
    assert np.array_equal(wide.values, small_amplitude.values)


def test_q_cut_mappings():
    f = AngularFilter(np.radians(2.0))
    w = np.array([-1e15, 0.0, 1e15])
    ws = 2.7e15
    assert f.q_cut(w, ws) == pytest.approx((ws + w) / c * np.sin(np.radians(2.0)))
    d = AngularFilter(np.radians(2.0), mapping="degenerate")
    assert np.all(d.q_cut(w, ws) == ws / c * np.sin(np.radians(2.0)))


def test_filters_commute_and_never_amplify(small_amplitude):
    s = SpectralFilter(0.5 * FROZEN_BANDWIDTH)
    a = AngularFilter(np.radians(3.0))
    one = apply_angular(apply_spectral(small_amplitude, s), a)
    two = apply_spectral(apply_angular(small_amplitude, a), s)
    assert np.array_equal(one.values, two.values)
    assert np.all(np.abs(one.values) <= np.abs(small_amplitude.values))


def test_spectral_filter_keeps_parity(small_amplitude):
    out = apply_spectral(small_amplitude, SpectralFilter(0.3 * FROZEN_BANDWIDTH))
    assert np.array_equal(out.values, out.values[:, ::-1])


def test_hard_aperture_is_binary(small_amplitude):
    out = apply_angular(small_amplitude, AngularFilter(np.radians(2.0)))
    kept = out.values == small_amplitude.values
    assert np.all(kept | (out.values == 0))
    assert kept.any() and not kept.all()


@pytest.fixture(scope="module")
def medium(crystal):
    spectral = SpectralFilter(FROZEN_BANDWIDTH)
    grid = build_grid(crystal, n_q=512, n_omega=2048, spectral=spectral)
    return compute_amplitude(crystal, grid), spectral


def test_narrower_bandwidth_widens_peak(crystal, medium):
    amp, spectral = medium
    ref = temporal_fwhm(apply_spectral(amp, spectral)).fwhm
    half = temporal_fwhm(apply_spectral(amp, SpectralFilter(spectral.bandwidth / 2))).fwhm
    assert half > ref


def test_aperture_sweep_monotone(medium):
    amp, spectral = medium
    base = apply_spectral(amp, spectral)
    widths = [temporal_fwhm(apply_angular(base, AngularFilter(np.radians(a)))).fwhm
              for a in (1, 1.5, 2, 3, 4, 6, 8, 12, 90)]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(widths, widths[1:]))
    assert widths[2] > 2 * widths[-1]


def test_two_degree_stop_suppresses_arms(medium):
    amp, spectral = medium
    base = apply_spectral(amp, spectral)

    def arm_fraction(v):
        mag = np.abs(near_field(v).values) ** 2
        weights = v.grid.r_weights[:, None]
        far = v.grid.r_nodes[:, None] > 200e-6
        return float((mag * weights * far).sum() / (mag * weights).sum())

    assert arm_fraction(apply_angular(base, AngularFilter(np.radians(2.0)))) < 0.2 * arm_fraction(base)
