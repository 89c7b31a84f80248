"""
Glue between the physics modules: grid selection, amplitude assembly,
filtered observables and the bandwidth calibration.
"""

import numpy as np
from scipy.optimize import brentq

from .analytics import fwhm
from .biphoton import integrated_coincidence_spectral, on_axis, spatial_profile
from .dispersion import signal_band_edge
from .exceptions import ConfigError
from .filters import SpectralFilter, apply_angular, apply_spectral
from .grid import SpectralAmplitude, make_grid
from .phasematch import DEFAULT_GAIN, amplitude_from_mismatch, mismatch_field, phase_matched_q

OMEGA_FACTOR = 3.0  # omega_max = 3 x filter bandwidth
Q_FACTOR = 1.2  # q_max = 1.2 x largest phase-matched q in the band
EDGE_MARGIN = 1e-3  # stay this fraction inside the Sellmeier band edge

# fixed cut lattices, shared by every command so that cuts can be compared sample by sample
CUT_T = np.linspace(-100e-15, 100e-15, 4001)
CUT_X = np.linspace(-20e-6, 20e-6, 4001)


def auto_omega_max(crystal, spectral=None):
    edge = (1 - EDGE_MARGIN) * signal_band_edge(crystal)
    if spectral is None or np.isinf(spectral.bandwidth):
        return edge
    return min(OMEGA_FACTOR * (abs(spectral.center_offset) + spectral.bandwidth), edge)


def auto_q_max(crystal, omega_max, delta0_override=None, samples=65):
    """1.2 x the largest transverse wave vector on the phase-matching curve for |w| <= omega_max."""
    qs = [phase_matched_q(crystal, w, delta0_override) for w in np.linspace(0, omega_max, samples)]
    qs = np.asarray(qs, dtype=float)
    if np.all(np.isnan(qs)):
        raise ConfigError("no phase-matched transverse wave vector inside the frequency band")
    return Q_FACTOR * float(np.nanmax(qs))


def build_grid(crystal, n_q=1024, n_omega=4096, q_max=None, omega_max=None, spectral=None,
               delta0_override=None):
    if omega_max is None:
        omega_max = auto_omega_max(crystal, spectral)
    if omega_max >= signal_band_edge(crystal):
        raise ConfigError(
            f"omega_max {omega_max:.3e} rad/s reaches beyond the Sellmeier band edge "
            f"{signal_band_edge(crystal):.3e} rad/s"
        )
    if q_max is None:
        q_max = auto_q_max(crystal, omega_max, delta0_override)
    return make_grid(n_q, n_omega, q_max, omega_max, crystal.omega_s)


def compute_amplitude(crystal, grid, gain=DEFAULT_GAIN, delta0_override=None):
    """Unfiltered V(q, w) on ``grid``; evanescent corners are set to zero."""
    field = mismatch_field(crystal, grid.q_nodes, grid.omega_nodes, delta0_override)
    return SpectralAmplitude(grid, amplitude_from_mismatch(field.values, gain), gain)


def apply_filters(amplitude, spectral=None, angular=None):
    if spectral is not None:
        amplitude = apply_spectral(amplitude, spectral)
    if angular is not None:
        amplitude = apply_angular(amplitude, angular)
    return amplitude


def temporal_cut(amplitude, t=CUT_T):
    """|psi(0, t)|^2 on a fine time lattice."""
    return np.abs(on_axis(amplitude, t)) ** 2


def spatial_cut(amplitude, x=CUT_X):
    """|psi(x, 0)|^2 along a transverse axis through the origin."""
    return np.abs(spatial_profile(amplitude, np.abs(x), 0.0)) ** 2


def temporal_fwhm(amplitude, t=CUT_T):
    return fwhm(temporal_cut(amplitude, t), t)


def spatial_fwhm(amplitude, x=CUT_X):
    return fwhm(spatial_cut(amplitude, x), x)


def integrated_fwhm(amplitude):
    profile = integrated_coincidence_spectral(amplitude)
    return fwhm(profile, amplitude.grid.t_nodes)


def calibrate_bandwidth(crystal, target_fwhm=4.4e-15, order=8, n_q=1024, n_omega=4096,
                        gain=DEFAULT_GAIN, delta0_override=None, bracket=(2e14, 1.5e15),
                        xtol=1e10):
    """Super-gaussian bandwidth giving an on-axis |psi(0,t)|^2 FWHM of ``target_fwhm``.

    The grid is rebuilt for every trial bandwidth with the same auto rules a
    run would use.  Returns ``(bandwidth, achieved_fwhm)``.
    """
    def width(bandwidth):
        spectral = SpectralFilter(bandwidth=bandwidth, order=order)
        grid = build_grid(crystal, n_q, n_omega, spectral=spectral, delta0_override=delta0_override)
        amp = apply_spectral(compute_amplitude(crystal, grid, gain, delta0_override), spectral)
        return temporal_fwhm(amp).fwhm

    bandwidth = brentq(lambda b: width(b) - target_fwhm, *bracket, xtol=xtol)
    return bandwidth, width(bandwidth)


def quadratic_comparison_box(crystal, params, validity_fraction=0.02):
    """(r_box, t_box) covering the arms fed by |w| <= validity_fraction * w_s.

    On the arms a frequency w lands near t = 2 w / omega0^2 and r = t omega0 / q0;
    inside the quadratic-validity band the two models should share their shape.
    """
    omega_box = validity_fraction * crystal.omega_s
    t_box = 2 * omega_box / params.omega0**2
    return t_box / params.asymptote_slope, t_box


def quadratic_shape_correlation(crystal, bandwidth, n_r=41, n_q=1024, n_omega=4096,
                                tail_tolerance=0.1, gain=DEFAULT_GAIN, delta0_override=None,
                                window_order=2):
    """Pearson correlation of |psi| between the full-dispersion field and the quadratic oracle.

    The full field needs a band limit; a gaussian window of half-width
    ``bandwidth`` is used because it has no sidelobes of its own.  Points
    within the band-limit zone of the asymptotes, where truncating the oracle
    at u_c = (bandwidth/omega0)^2 changes it by more than ``tail_tolerance``,
    are left out: |H| >= 4 / (pi tail_tolerance^2 u_c).  ``window_order`` > 2
    swaps in the super-gaussian detection window, whose ringing lowers the score.
    Returns ``(correlation, n_points)``.
    """
    from .analytics import hyperbola_level, quadratic_psi
    from .biphoton import time_transform_at
    from .hankel import fourier_bessel_eval
    from .phasematch import quadratic_params

    params = quadratic_params(crystal, gain, delta0_override)
    window = SpectralFilter(bandwidth=bandwidth, order=window_order)
    grid = build_grid(crystal, n_q, n_omega, spectral=window, delta0_override=delta0_override)
    amp = apply_spectral(compute_amplitude(crystal, grid, gain, delta0_override), window)

    r_box, t_box = quadratic_comparison_box(crystal, params)
    r = np.linspace(0.0, r_box, n_r)
    t = np.linspace(-t_box, t_box, 2 * n_r - 1)
    full = fourier_bessel_eval(time_transform_at(amp.values, grid, t), grid, r)
    rr, tt = np.meshgrid(r, t, indexing="ij")
    u_c = (bandwidth / params.omega0) ** 2
    keep = np.abs(hyperbola_level(params, rr, tt)) >= 4 / (np.pi * tail_tolerance**2 * u_c)
    model = quadratic_psi(params, rr[keep], tt[keep], rtol=1e-7)
    corr = np.corrcoef(np.abs(full[keep]), np.abs(model))[0, 1]
    return float(corr), int(keep.sum())
