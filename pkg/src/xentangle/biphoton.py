"""
From the spectral amplitude V(q, w) to space-time observables.

    psi(r, t) = int q dq/(2 pi) J0(q r) int dw/(2 pi) exp(-i w t) V(q, w)
    V(q, t)   = int dw/(2 pi) exp(-i w t) V(q, w)

The frequency integral is a uniform-grid FFT (with the half-step offsets of
``SimGrid`` handled by pre/post phase factors), the radial one the Bessel
zero transform of ``hankel``.  Integrated coincidences can be formed on the
spatial side (sum over r of |psi|^2) or on the spectral side (sum over q of
|V(q, t)|^2); the two agree by the discrete Parseval relation.
"""

import numpy as np
import scipy.fft

from .exceptions import GridMismatchError
from .grid import BiphotonField, SpectralAmplitude
from .hankel import fourier_bessel_eval, hankel0_transform


def _phases(grid):
    n = grid.n_omega
    centre = (n - 1) / 2
    k = np.arange(n)
    pre = np.exp(2j * np.pi * centre * k / n)
    post = np.exp(2j * np.pi * centre * (k - centre) / n)
    return pre, post


def time_transform(values, grid, workers=None):
    """int dw/(2 pi) exp(-i w t) f(w) from ``grid.omega_nodes`` to ``grid.t_nodes`` along the last axis."""
    values = np.asarray(values)
    if values.shape[-1] != grid.n_omega:
        raise GridMismatchError(
            f"last axis has {values.shape[-1]} samples, grid has {grid.n_omega} frequencies"
        )
    pre, post = _phases(grid)
    spectrum = scipy.fft.fft(values * pre, axis=-1, workers=workers)
    return spectrum * (post * grid.d_omega / (2 * np.pi))


def time_transform_at(values, grid, t, chunk=256):
    """Same integral evaluated at arbitrary times by direct summation."""
    values = np.asarray(values)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    omega = grid.omega_nodes
    out = np.empty(values.shape[:-1] + t.shape, dtype=complex)
    for start in range(0, t.size, chunk):
        sl = slice(start, start + chunk)
        kernel = np.exp(-1j * np.outer(omega, t[sl]))
        out[..., sl] = values @ kernel
    return out * (grid.d_omega / (2 * np.pi))


def near_field(amplitude: SpectralAmplitude, workers=None) -> BiphotonField:
    """psi_pw(r, t) on the conjugate (r_nodes, t_nodes) lattice."""
    grid = amplitude.grid
    v_t = time_transform(amplitude.values, grid, workers=workers)
    return BiphotonField(grid=grid, values=hankel0_transform(v_t, grid))


def on_axis_spectrum(amplitude: SpectralAmplitude):
    """psi(r = 0, w) = sum_q w_q V(q, w); J0(0) = 1 so no interpolation is involved."""
    return amplitude.grid.q_weights @ amplitude.values


def on_axis(amplitude: SpectralAmplitude, t=None):
    """psi(0, t): on ``grid.t_nodes`` (FFT) or at the requested times (direct sum)."""
    spec = on_axis_spectrum(amplitude)
    if t is None:
        return time_transform(spec, amplitude.grid)
    return time_transform_at(spec, amplitude.grid, t)


def spatial_profile(amplitude: SpectralAmplitude, r, t=0.0):
    """psi(r, t) at arbitrary radii for one time."""
    grid = amplitude.grid
    column = time_transform_at(amplitude.values, grid, [t])[:, 0]
    return fourier_bessel_eval(column, grid, r)


def far_field_temporal(amplitude: SpectralAmplitude, q_index):
    """V(q_k, t) on ``grid.t_nodes`` for one transverse wave vector."""
    n_q = amplitude.grid.n_q
    if not -n_q <= q_index < n_q:
        raise IndexError(f"q index {q_index} out of range for {n_q} nodes")
    return time_transform(amplitude.values[q_index], amplitude.grid)


def integrated_coincidence(field: BiphotonField):
    """I(t) = 2 pi int r dr |psi(r, t)|^2, summed over the radial nodes."""
    return field.grid.r_weights @ np.abs(field.values) ** 2


def integrated_coincidence_spectral(amplitude: SpectralAmplitude, workers=None):
    """The same quantity as int q dq/(2 pi) |V(q, t)|^2."""
    v_t = time_transform(amplitude.values, amplitude.grid, workers=workers)
    return amplitude.grid.q_weights @ np.abs(v_t) ** 2


def parseval_residual(spatial, spectral):
    """Largest pointwise relative difference of the two integrated profiles."""
    spatial = np.asarray(spatial, dtype=float)
    spectral = np.asarray(spectral, dtype=float)
    scale = np.maximum(np.abs(spectral), np.abs(spatial))
    diff = np.abs(spatial - spectral)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, diff / scale, 0.0)
    return float(rel.max(initial=0.0))


def time_parity_residual(field: BiphotonField):
    """max |psi(r, t) - psi(r, -t)| / max |psi|; t_nodes are symmetric so -t is the reversed axis."""
    vals = field.values
    peak = np.abs(vals).max()
    if peak == 0:
        return 0.0
    return float(np.abs(vals - vals[:, ::-1]).max() / peak)
