"""
Detection filters acting on the spectral amplitude.

Both filters multiply the single-photon amplitude V, so a coincidence rate
sees the product of the two transmissions (T^2 for a symmetric pair).
"""

from dataclasses import dataclass

import numpy as np
from scipy.constants import c

from .grid import SpectralAmplitude


@dataclass(frozen=True)
class SpectralFilter:
    """Super-gaussian amplitude filter exp(-((w - center)/bandwidth)^order).

    ``bandwidth`` is the half-width at 1/e of the amplitude, rad/s; an
    infinite bandwidth is all-pass.
    """

    bandwidth: float
    order: int = 8
    center_offset: float = 0.0

    def __post_init__(self):
        if self.order < 2 or self.order % 2:
            raise ValueError("super-gaussian order must be an even integer >= 2")
        if not self.bandwidth > 0:
            raise ValueError("filter bandwidth must be positive")

    def transmission(self, omega):
        x = np.abs(np.asarray(omega, dtype=float) - self.center_offset) / self.bandwidth
        # |x|^n rather than x^n: pow rounds differently for -x, and parity must be exact
        return np.exp(-(x**self.order))


@dataclass(frozen=True)
class AngularFilter:
    """Hard circular stop in the far field cutting propagation angles above ``alpha_max``.

    ``mapping="frequency"`` converts the in-air angle to a transverse wave
    vector at each photon frequency, q_cut = (w_s + w)/c sin(alpha_max);
    ``mapping="degenerate"`` uses the carrier for every frequency.
    """

    alpha_max: float
    mapping: str = "frequency"

    def __post_init__(self):
        if not self.alpha_max > 0:
            raise ValueError("alpha_max must be positive")
        if self.mapping not in ("frequency", "degenerate"):
            raise ValueError(f"unknown angle mapping {self.mapping!r}")

    @property
    def all_pass(self):
        return self.alpha_max >= np.pi / 2

    def q_cut(self, omega, carrier):
        omega = np.asarray(omega, dtype=float)
        if self.mapping == "degenerate":
            total = np.full_like(omega, carrier)
        else:
            total = carrier + omega
        return total / c * np.sin(self.alpha_max)

    def mask(self, q, omega, carrier):
        q = np.asarray(q, dtype=float)[:, None]
        return q <= self.q_cut(omega, carrier)[None, :]


def apply_spectral(amplitude: SpectralAmplitude, spectral: SpectralFilter) -> SpectralAmplitude:
    """Multiply every row of V by T(w).  All-pass filters return V untouched."""
    if np.isinf(spectral.bandwidth):
        return amplitude
    trans = spectral.transmission(amplitude.grid.omega_nodes)
    return amplitude.replace(amplitude.values * trans[None, :])


def apply_angular(amplitude: SpectralAmplitude, angular: AngularFilter) -> SpectralAmplitude:
    """Zero every node with q > q_cut(w)."""
    if angular.all_pass:
        return amplitude
    g = amplitude.grid
    keep = angular.mask(g.q_nodes, g.omega_nodes, g.carrier)
    return amplitude.replace(np.where(keep, amplitude.values, 0.0))
