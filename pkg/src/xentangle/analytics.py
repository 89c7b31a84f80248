"""
Analytic oracle of the quadratic model, X geometry diagnostics, peak metrics
and plane-wave-pump validity.

Within the quadratic mismatch the biphoton amplitude reduces to

    psi(r, t) = g q0^2 omega0 / (8 sqrt(pi^3 i)) int_0^1 ds s^(-3/2)
                exp(i H / (4 s)) exp(i s delta0),      H = q0^2 r^2 - omega0^2 t^2.

With u = 1/s the integral becomes int_1^inf du u^(-1/2) exp(i a u) exp(i delta0/u),
a = H/4.  The finite part [1, U] is done by composite Filon quadrature (the
exp(i a u) factor integrated exactly against a degree-4 interpolant of the
slowly varying amplitude) and the tail (U, inf) by Fresnel integrals of the
first two terms of exp(i delta0/u) = 1 + i delta0/u + ...
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import fresnel

from .dispersion import Role, group_delay_per_length, walkoff_angle
from .exceptions import ConvergenceError, PeakNotResolved, RidgeNotDetected

# --------------------------------------------------------------------------
# Filon quadrature


_FILON_NODES = np.cos(np.pi * np.arange(4, -1, -1) / 4)  # Chebyshev-Lobatto on [-1, 1]
_FILON_INV_VANDERMONDE = np.linalg.inv(np.vander(_FILON_NODES, 5, increasing=True))


def _moments(theta, kmax=4):
    """m_k(theta) = int_{-1}^{1} y^k exp(i theta y) dy for k = 0..kmax (vectorized in theta)."""
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape + (kmax + 1,), dtype=complex)
    small = np.abs(theta) < 2.0
    if np.any(small):
        ts = theta[small]
        acc = np.zeros(ts.shape + (kmax + 1,), dtype=complex)
        term = np.ones_like(ts, dtype=complex)  # (i theta)^n / n!
        for n in range(40):
            for k in range(kmax + 1):
                if (k + n) % 2 == 0:
                    acc[..., k] += term * (2.0 / (k + n + 1))
            term = term * (1j * ts) / (n + 1)
        out[small] = acc
    big = ~small
    if np.any(big):
        tb = theta[big]
        e_plus = np.exp(1j * tb)
        e_minus = np.exp(-1j * tb)
        m = 2 * np.sin(tb) / tb
        out[big, 0] = m
        for k in range(1, kmax + 1):
            m = (e_plus - (-1) ** k * e_minus) / (1j * tb) - k / (1j * tb) * m
            out[big, k] = m
    return out


def filon_integral(amplitude, a, edges):
    """int amplitude(u) exp(i a u) du over consecutive panels given by ``edges``."""
    edges = np.asarray(edges, dtype=float)
    centre = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = centre[:, None] + half[:, None] * _FILON_NODES[None, :]
    coeffs = amplitude(nodes) @ _FILON_INV_VANDERMONDE.T
    mom = _moments(a * half)
    panel = half * np.exp(1j * a * centre) * np.sum(coeffs * mom, axis=1)
    return panel.sum()


def _fresnel_tail(a, upper):
    """int_U^inf u^(-1/2) exp(i a u) du for a != 0."""
    x0 = math.sqrt(2 * abs(a) * upper / math.pi)
    s, c = fresnel(x0)
    val = math.sqrt(2 * math.pi / abs(a)) * complex(0.5 - c, 0.5 - s)
    return val if a > 0 else val.conjugate()


def _tail(a, delta0, upper):
    """Tail of int u^(-1/2) (1 + i delta0/u) exp(i a u) from U to inf, plus an error bound."""
    f_half = _fresnel_tail(a, upper)
    # int_U^inf u^(-3/2) e^{iau} du = 2 U^(-1/2) e^{iaU} + 2 i a int_U^inf u^(-1/2) e^{iau} du
    f_three_half = 2 * upper**-0.5 * complex(math.cos(a * upper), math.sin(a * upper)) + 2j * a * f_half
    value = f_half + 1j * delta0 * f_three_half
    # |e^{ix} - 1 - ix| <= x^2/2, then one integration by parts
    bound = delta0**2 * upper**-2.5 / abs(a)
    return value, bound


def s_integral(h, delta0, rtol=1e-10, max_refine=12):
    """int_0^1 ds s^(-3/2) exp(i h/(4 s)) exp(i s delta0) for h != 0."""
    a = h / 4.0
    if a == 0:
        raise ConvergenceError("integral diverges on the asymptote H = 0")

    def amp(u):
        return u**-0.5 * np.exp(1j * delta0 / u)

    scale = math.sqrt(math.pi / abs(a)) + 1.0
    upper = max(2.0, 4.0 * abs(delta0))
    tail, bound = _tail(a, delta0, upper)
    while bound > 1e-3 * rtol * scale:
        upper *= 2.0
        tail, bound = _tail(a, delta0, upper)

    # panel width limited by the amplitude scale: u/(|delta0| + 1) near u ~ 1, growing geometrically
    kappa = 0.5
    previous = None
    for _ in range(max_refine):
        edges = [1.0]
        while edges[-1] < upper:
            u = edges[-1]
            step = kappa * u * min(1.0, u / (abs(delta0) + 1.0))
            edges.append(min(u + step, upper))
        value = filon_integral(amp, a, np.array(edges)) + tail
        if previous is not None and abs(value - previous) <= rtol * max(abs(value), 1e-300):
            return value
        previous = value
        kappa /= 2.0
    raise ConvergenceError(
        f"Filon quadrature did not converge (H={h:.3e}, delta0={delta0:.3e})",
        estimate=previous,
        bound=abs(value - previous) if previous is not None else None,
    )


def quadratic_prefactor(params):
    return params.gain * params.q0**2 * params.omega0 / (8 * np.sqrt(np.pi**3 * 1j))


def hyperbola_level(params, r, t):
    """H(r, t) = q0^2 r^2 - omega0^2 t^2 (dimensionless)."""
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    return (params.q0 * r) ** 2 - (params.omega0 * t) ** 2


def quadratic_psi(params, r, t, h_floor=0.0, rtol=1e-10, return_clamped=False):
    """Biphoton amplitude of the quadratic model at (r, t).

    |H| below ``h_floor`` is clamped to +-h_floor (the model diverges as
    1/sqrt|H| on the X asymptotes); with ``return_clamped`` the mask of
    clamped points is returned too.
    """
    h = np.asarray(hyperbola_level(params, r, t), dtype=float)
    clamped = np.abs(h) < h_floor
    h_eff = np.where(clamped, np.where(h < 0, -h_floor, h_floor), h)
    if np.any(h_eff == 0):
        raise ConvergenceError("H = 0 requested without a regularization floor")
    # psi depends on (r, t) only through H: integrate once per distinct level
    levels, inverse = np.unique(h_eff.ravel(), return_inverse=True)
    ints = np.array([s_integral(lv, params.delta0, rtol=rtol) for lv in levels])
    values = (quadratic_prefactor(params) * ints[inverse]).reshape(h.shape)
    if h.ndim == 0:
        values, clamped = values[()], bool(clamped)
    if return_clamped:
        return values, clamped
    return values


# --------------------------------------------------------------------------
# peak metrics


@dataclass(frozen=True)
class PeakMetrics:
    fwhm: float
    peak_value: float
    peak_location: float


def _crossing(x0, y0, x1, y1, level):
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def fwhm(profile, axis, edge_fraction=0.05):
    """Full width at half maximum of the dominant peak.

    The baseline is the median of the samples within ``edge_fraction`` of
    either end of the window; crossings are linearly interpolated.
    """
    y = np.asarray(profile, dtype=float)
    x = np.asarray(axis, dtype=float)
    if y.shape != x.shape or y.ndim != 1:
        raise ValueError("profile and axis must be 1-D arrays of equal length")
    n_edge = max(1, int(round(edge_fraction * y.size)))
    baseline = float(np.median(np.concatenate([y[:n_edge], y[-n_edge:]])))
    i_peak = int(np.argmax(y))
    peak = float(y[i_peak])
    level = baseline + 0.5 * (peak - baseline)
    if not peak > baseline:
        raise PeakNotResolved("peak not resolved in window")

    left = i_peak
    while left > 0 and y[left] > level:
        left -= 1
    right = i_peak
    while right < y.size - 1 and y[right] > level:
        right += 1
    if y[left] > level or y[right] > level or left == i_peak or right == i_peak:
        raise PeakNotResolved("peak not resolved in window")
    x_left = _crossing(x[left], y[left], x[left + 1], y[left + 1], level)
    x_right = _crossing(x[right - 1], y[right - 1], x[right], y[right], level)
    return PeakMetrics(fwhm=float(x_right - x_left), peak_value=peak, peak_location=float(x[i_peak]))


# --------------------------------------------------------------------------
# X-arm slope


@dataclass(frozen=True)
class RidgeFit:
    slope_positive: float  # t/r along the t > 0 arm, s/m
    slope_negative: float  # |t|/r along the t < 0 arm
    r_used: np.ndarray

    @property
    def slope(self):
        return 0.5 * (self.slope_positive + self.slope_negative)


def _branch_argmax(mag, t):
    """Parabolically refined argmax along t of each row, plus the row maxima."""
    idx = np.argmax(mag, axis=1)
    rows = np.arange(mag.shape[0])
    peak = mag[rows, idx]
    inner = (idx > 0) & (idx < mag.shape[1] - 1)
    t_peak = t[idx].astype(float)
    i = idx[inner]
    r = rows[inner]
    ym, y0, yp = mag[r, i - 1], mag[r, i], mag[r, i + 1]
    denom = ym - 2 * y0 + yp
    with np.errstate(invalid="ignore", divide="ignore"):
        shift = np.where(denom < 0, 0.5 * (ym - yp) / denom, 0.0)
    t_peak[inner] = t[i] + shift * (t[1] - t[0])
    return t_peak, peak, inner


def ridge_slope(field, floor=0.1, min_points=6):
    """Least-squares slope of the X arms t(r), one value per time branch.

    For every radial node the maximum of |psi| over t > 0 (and t < 0) is
    located.  The ridge extends over the radii whose arm maximum stays above
    ``floor`` times the largest off-axis arm maximum; the fit uses the outer
    half of that extent.
    """
    grid = field.grid
    mag = np.abs(field.values)
    t = grid.t_nodes
    r = grid.r_nodes
    pos = t > 0
    slopes = []
    used = None
    for branch in (pos, ~pos):
        tb = np.abs(t[branch])
        sub = mag[:, branch]
        order = np.argsort(tb)
        tb, sub = tb[order], sub[:, order]
        t_peak, peak, interior = _branch_argmax(sub, tb)
        # arms are off-axis: discard rows whose maximum sits on the first time node
        off_axis = interior & (t_peak > 2 * grid.dt)
        if not np.any(off_axis):
            raise RidgeNotDetected("no off-axis maximum along t: ridge not detected")
        threshold = floor * peak[off_axis].max()
        alive = off_axis & (peak >= threshold)
        # contiguous extent starting from the first detected radius
        idx = np.flatnonzero(alive)
        first = idx[0]
        stop = first
        while stop + 1 < alive.size and alive[stop + 1]:
            stop += 1
        extent = np.arange(first, stop + 1)
        outer = extent[extent.size // 2:]
        if outer.size < min_points:
            raise RidgeNotDetected(
                f"ridge not detected: only {outer.size} radial points along the arm"
            )
        coef = np.polyfit(r[outer], t_peak[outer], 1)
        if not coef[0] > 0:
            raise RidgeNotDetected("ridge not detected: arm does not move away from t = 0")
        slopes.append(float(coef[0]))
        used = r[outer]
    return RidgeFit(slope_positive=slopes[0], slope_negative=slopes[1], r_used=used)


# --------------------------------------------------------------------------
# plane-wave-pump validity


@dataclass(frozen=True)
class PWPReport:
    walkoff_angle: float  # rad
    walkoff_shift: float  # m, rho * l_c
    gvm_delay: float  # s, |1/v_s - 1/v_p| l_c
    pump_waist: float
    pump_duration: float
    ratio_space: float
    ratio_time: float
    threshold: float

    @property
    def space_ok(self):
        return self.ratio_space >= self.threshold

    @property
    def time_ok(self):
        return self.ratio_time >= self.threshold

    @property
    def valid(self):
        return self.space_ok and self.time_ok

    def as_dict(self):
        return {
            "walkoff_angle_rad": self.walkoff_angle,
            "walkoff_shift_m": self.walkoff_shift,
            "gvm_delay_s": self.gvm_delay,
            "pump_waist_m": self.pump_waist,
            "pump_duration_s": self.pump_duration,
            "ratio_space": self.ratio_space,
            "ratio_time": self.ratio_time,
            "threshold": self.threshold,
            "space_ok": self.space_ok,
            "time_ok": self.time_ok,
            "valid": self.valid,
        }


def pwp_validity(crystal, pump_waist, pump_duration, threshold=10.0):
    """Compare pump size and duration with walk-off and group-velocity mismatch."""
    if not pump_waist > 0 or not pump_duration > 0:
        raise ValueError("pump waist and duration must be positive")
    rho = walkoff_angle(crystal)
    shift = rho * crystal.length
    delay = abs(
        group_delay_per_length(crystal, Role.SIGNAL) - group_delay_per_length(crystal, Role.PUMP)
    ) * crystal.length
    return PWPReport(
        walkoff_angle=rho,
        walkoff_shift=shift,
        gvm_delay=delay,
        pump_waist=float(pump_waist),
        pump_duration=float(pump_duration),
        ratio_space=float(pump_waist / shift),
        ratio_time=float(pump_duration / delay),
        threshold=float(threshold),
    )
