"""
Plane-wave-pump phase mismatch and spectral biphoton amplitude.

The signal is ordinary, so the mismatch depends on |q| only:

    delta_pw(q, w) = kz_s(q, w) + kz_s(q, -w) - k_p

and the first-order (low-gain) amplitude is

    V(q, w) = g exp(i delta_pw l_c / 2) sinc(delta_pw l_c / 2),  sinc(x) = sin(x)/x.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, brentq

from .dispersion import Role, gvd_signal, kz, wave_number
from .exceptions import ConvergenceError

DEFAULT_GAIN = 1e-3


@dataclass(frozen=True)
class QuadraticParams:
    """Parameters of the quadratic mismatch  delta0 + w^2/omega0^2 - q^2/q0^2."""

    delta0: float
    omega0: float
    q0: float
    gain: float = DEFAULT_GAIN

    def __post_init__(self):
        if self.omega0 <= 0 or self.q0 <= 0:
            raise ValueError("omega0 and q0 must be positive")
        if self.gain > 0.1:
            warnings.warn(
                f"gain {self.gain} is not small: the first-order amplitude is a low-gain result",
                RuntimeWarning,
                stacklevel=3,
            )

    def mismatch(self, q, omega):
        """Quadratic approximation of delta_pw * l_c."""
        q = np.asarray(q, dtype=float)
        omega = np.asarray(omega, dtype=float)
        return self.delta0 + (omega / self.omega0) ** 2 - (q / self.q0) ** 2

    @property
    def asymptote_slope(self):
        """q0 / omega0: slope t/r of the X arms (s/m)."""
        return self.q0 / self.omega0


@dataclass(frozen=True)
class MismatchField:
    """delta_pw * l_c sampled on a grid; ``propagating`` is False on evanescent nodes."""

    values: np.ndarray
    propagating: np.ndarray


def delta_pw(crystal, q, omega):
    """Exact plane-wave-pump mismatch in rad/m."""
    kp = wave_number(crystal, Role.PUMP, 0.0)
    return kz(crystal, Role.SIGNAL, q, omega) + kz(crystal, Role.SIGNAL, q, -omega) - kp


def collinear_mismatch(crystal, theta=None):
    """Delta0 = (2 k_s - k_p(theta)) l_c at degeneracy (dimensionless)."""
    ks = wave_number(crystal, Role.SIGNAL, 0.0)
    kp = wave_number(crystal, Role.PUMP, 0.0, theta=theta)
    return float((2 * ks - kp) * crystal.length)


def mismatch_field(crystal, q_nodes, omega_nodes, delta0_override=None):
    """delta_pw * l_c on the outer product of ``q_nodes`` x ``omega_nodes``.

    Nodes where either signal frequency is evanescent are flagged and carry
    NaN.  ``delta0_override`` shifts the whole field so that its collinear
    degenerate value equals the override.
    """
    q = np.asarray(q_nodes, dtype=float)[:, None]
    omega = np.asarray(omega_nodes, dtype=float)
    k_plus = wave_number(crystal, Role.SIGNAL, omega)[None, :]
    k_minus = wave_number(crystal, Role.SIGNAL, -omega)[None, :]
    kp = float(wave_number(crystal, Role.PUMP, 0.0))
    propagating = (q <= k_plus) & (q <= k_minus)
    with np.errstate(invalid="ignore"):
        kz_plus = np.sqrt((k_plus - q) * (k_plus + q))
        kz_minus = np.sqrt((k_minus - q) * (k_minus + q))
    values = (kz_plus + kz_minus - kp) * crystal.length
    if delta0_override is not None:
        values = values + (float(delta0_override) - collinear_mismatch(crystal))
    values = np.where(propagating, values, np.nan)
    return MismatchField(values=values, propagating=propagating)


def amplitude_from_mismatch(mismatch_lc, gain=DEFAULT_GAIN):
    """g exp(i x/2) sinc(x/2) for x = delta_pw * l_c; NaN (evanescent) -> 0."""
    x = np.asarray(mismatch_lc, dtype=float)
    half = 0.5 * x
    # np.sinc is the normalized sin(pi x)/(pi x)
    v = gain * np.exp(1j * half) * np.sinc(half / np.pi)
    return np.where(np.isnan(x), 0.0, v)


def spectral_amplitude(crystal, params, q, omega, delta0_override=None):
    """V(q, omega) at arbitrary points (full dispersion, non-paraxial)."""
    x = delta_pw(crystal, q, omega) * crystal.length
    if delta0_override is not None:
        x = x + (float(delta0_override) - collinear_mismatch(crystal))
    return amplitude_from_mismatch(x, params.gain)


def quadratic_params(crystal, gain=DEFAULT_GAIN, delta0_override=None):
    ks = float(wave_number(crystal, Role.SIGNAL, 0.0))
    kpp = gvd_signal(crystal)
    delta0 = collinear_mismatch(crystal) if delta0_override is None else float(delta0_override)
    return QuadraticParams(
        delta0=delta0,
        omega0=float(np.sqrt(1.0 / (kpp * crystal.length))),
        q0=float(np.sqrt(ks / crystal.length)),
        gain=gain,
    )


def degeneracy_angle(crystal, tol=1e-6, xtol=1e-14):
    """Cut angle giving collinear degenerate phase matching, Delta0(theta) = 0."""
    def f(theta):
        return collinear_mismatch(crystal, theta)

    lo, hi = 1e-6, np.pi / 2 - 1e-6
    if np.sign(f(lo)) == np.sign(f(hi)):
        raise ConvergenceError("no collinear degenerate phase matching for this crystal")
    theta = bisect(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    residual = abs(f(theta))
    if residual >= tol:
        raise ConvergenceError(
            f"bisection residual |Delta0| = {residual:.2e} above {tol:.1e}",
            estimate=theta,
            bound=residual,
        )
    return theta


def phase_matched_q(crystal, omega, delta0_override=None):
    """Transverse wave vector where delta_pw(q, omega) = 0, or NaN if none.

    delta_pw decreases monotonically in q, so a root exists only when the
    collinear value is positive.
    """
    omega = float(omega)
    shift = 0.0 if delta0_override is None else (
        float(delta0_override) - collinear_mismatch(crystal)
    ) / crystal.length
    k_min = float(min(wave_number(crystal, Role.SIGNAL, omega),
                      wave_number(crystal, Role.SIGNAL, -omega)))

    def f(q):
        return float(delta_pw(crystal, q, omega)) + shift

    if f(0.0) <= 0:
        return np.nan
    return brentq(f, 0.0, k_min, xtol=1e-9 * k_min)
