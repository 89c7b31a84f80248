"""
Refractive indices and wave numbers of a uniaxial crystal.

Material data come from a small key/value crystal file (see ``load_crystal``)
holding one Sellmeier set per principal polarization, the cut angle, the
crystal length and the pump wavelength.  All quantities are SI inside the
module; the file itself uses um / nm / mm / deg.

Frequencies passed to ``wave_number`` and ``kz`` are offsets from the
carrier of the field: omega_s = omega_p / 2 for the signal, omega_p for the
pump.  Derivatives (GVD, group delay, walk-off) are taken by Richardson
extrapolated central differences so that any Sellmeier form works.
"""

import configparser
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.constants import c

from .exceptions import ConfigError, ConvergenceError, DispersionError, EvanescentError


def _sellmeier4(coefficients, lam_um):
    a, b, cc, d = coefficients
    lam2 = lam_um * lam_um
    return a + b / (lam2 - cc) - d * lam2


def _sellmeier_bc(coefficients, lam_um):
    # n^2 = A + sum_i B_i lam^2 / (lam^2 - C_i), coefficients = A, B1, C1, B2, C2, ...
    lam2 = lam_um * lam_um
    n2 = coefficients[0] + 0.0 * lam2
    for b, cc in zip(coefficients[1::2], coefficients[2::2]):
        n2 = n2 + b * lam2 / (lam2 - cc)
    return n2


SELLMEIER_FORMS = {
    "sellmeier4": (_sellmeier4, lambda n: n == 4),
    "sellmeier_bc": (_sellmeier_bc, lambda n: n >= 3 and n % 2 == 1),
}


@dataclass(frozen=True)
class SellmeierSet:
    """One principal-polarization dispersion law.

    ``valid_range`` is in meters; ``coefficients`` follow the convention of
    ``form`` with the wavelength in micrometers.
    """

    form: str
    coefficients: tuple
    valid_range: tuple

    def __post_init__(self):
        if self.form not in SELLMEIER_FORMS:
            raise ConfigError(
                f"unknown Sellmeier form {self.form!r}; known forms: {sorted(SELLMEIER_FORMS)}"
            )
        if not SELLMEIER_FORMS[self.form][1](len(self.coefficients)):
            raise ConfigError(
                f"form {self.form!r} does not take {len(self.coefficients)} coefficients"
            )
        lo, hi = self.valid_range
        if not 0 < lo < hi:
            raise ConfigError(f"bad Sellmeier range {self.valid_range!r}")

    def check_range(self, lam):
        lam = np.asarray(lam, dtype=float)
        lo, hi = self.valid_range
        if np.any(lam < lo) or np.any(lam > hi) or np.any(~np.isfinite(lam)):
            bad = lam[(lam < lo) | (lam > hi) | ~np.isfinite(lam)].ravel()[0]
            raise DispersionError(
                f"wavelength {bad * 1e9:.2f} nm outside Sellmeier range "
                f"[{lo * 1e9:.1f}, {hi * 1e9:.1f}] nm"
            )

    def n_squared(self, lam):
        self.check_range(lam)
        func = SELLMEIER_FORMS[self.form][0]
        return func(self.coefficients, np.asarray(lam, dtype=float) * 1e6)

    def index(self, lam):
        return np.sqrt(self.n_squared(lam))


@dataclass(frozen=True)
class CrystalSpec:
    ordinary: SellmeierSet
    extraordinary: SellmeierSet
    cut_angle: float
    length: float
    pump_wavelength: float
    source: str = ""

    def __post_init__(self):
        if not 0 < self.cut_angle < np.pi / 2:
            raise ConfigError(f"cut angle {np.degrees(self.cut_angle)} deg not in (0, 90)")
        if self.length <= 0:
            raise ConfigError("crystal length must be positive")
        if self.pump_wavelength <= 0:
            raise ConfigError("pump wavelength must be positive")

    @property
    def omega_p(self):
        return 2 * np.pi * c / self.pump_wavelength

    @property
    def omega_s(self):
        return self.omega_p / 2

    def with_(self, **changes):
        """Copy with some fields replaced (cut_angle, length, ...)."""
        fields = dict(
            ordinary=self.ordinary,
            extraordinary=self.extraordinary,
            cut_angle=self.cut_angle,
            length=self.length,
            pump_wavelength=self.pump_wavelength,
            source=self.source,
        )
        fields.update(changes)
        return CrystalSpec(**fields)


class Role(enum.Enum):
    """Which field a wave number refers to (type-I e -> o + o)."""

    SIGNAL = "signal_ordinary"
    PUMP = "pump_extraordinary"


# --------------------------------------------------------------------------
# crystal-data file


def _floats(text, key):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated decimals, got {text!r}") from None


def _parse_sellmeier(section, name):
    for key in ("form", "coefficients", "range_um"):
        if key not in section:
            raise ConfigError(f"[{name}] is missing key {key!r}")
    rng = _floats(section["range_um"], "range_um")
    if len(rng) != 2:
        raise ConfigError("range_um needs exactly two values")
    return SellmeierSet(
        form=section["form"].strip(),
        coefficients=_floats(section["coefficients"], "coefficients"),
        valid_range=(rng[0] * 1e-6, rng[1] * 1e-6),
    )


def parse_crystal(text):
    """Parse crystal-data text into a ``CrystalSpec``.

    Top-level keys (before any section) are ``cut_angle_deg``, ``length_mm``
    and ``pump_wavelength_nm``; sections ``[ordinary]`` and
    ``[extraordinary]`` carry ``form``, ``coefficients`` and ``range_um``.
    """
    parser = configparser.ConfigParser(
        comment_prefixes=("#", ";"), inline_comment_prefixes=("#",), interpolation=None
    )
    try:
        parser.read_string("[__top__]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed crystal file: {exc}") from None
    top = parser["__top__"]
    for sec in ("ordinary", "extraordinary"):
        if sec not in parser:
            raise ConfigError(f"crystal file lacks a [{sec}] section")
    try:
        cut = float(top["cut_angle_deg"])
        length = float(top["length_mm"])
        lam_p = float(top["pump_wavelength_nm"])
    except KeyError as exc:
        raise ConfigError(f"crystal file lacks top-level key {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ConfigError(f"crystal file: {exc}") from None
    return CrystalSpec(
        ordinary=_parse_sellmeier(parser["ordinary"], "ordinary"),
        extraordinary=_parse_sellmeier(parser["extraordinary"], "extraordinary"),
        cut_angle=np.radians(cut),
        length=length * 1e-3,
        pump_wavelength=lam_p * 1e-9,
        source=top.get("source", "").strip(),
    )


def load_crystal(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read crystal file {path}: {exc.strerror}") from None
    return parse_crystal(text)


def bundled_crystal(name="bbo"):
    """Crystal shipped in the package data directory."""
    return load_crystal(Path(__file__).parent / "data" / f"{name}.crystal")


# --------------------------------------------------------------------------
# indices and wave numbers


def index_ordinary(crystal, lam):
    return crystal.ordinary.index(lam)


def index_extraordinary(crystal, lam, theta):
    """Index of the extraordinary wave at angle ``theta`` from the optic axis."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0) or np.any(theta > np.pi / 2):
        raise ValueError("propagation angle must lie in [0, pi/2]")
    inv_o = 1.0 / crystal.ordinary.n_squared(lam)
    inv_e = 1.0 / crystal.extraordinary.n_squared(lam)
    return 1.0 / np.sqrt(np.cos(theta) ** 2 * inv_o + np.sin(theta) ** 2 * inv_e)


def _carrier(crystal, role):
    return crystal.omega_s if role is Role.SIGNAL else crystal.omega_p


def wave_number(crystal, role, omega_offset=0.0, theta=None):
    """k(omega_carrier + omega_offset) in rad/m.

    The pump is evaluated at ``theta`` (default: the cut angle), collinear
    with z.
    """
    omega = _carrier(crystal, role) + np.asarray(omega_offset, dtype=float)
    if np.any(omega <= 0):
        raise DispersionError("total frequency must be positive")
    lam = 2 * np.pi * c / omega
    if role is Role.SIGNAL:
        n = index_ordinary(crystal, lam)
    else:
        n = index_extraordinary(crystal, lam, crystal.cut_angle if theta is None else theta)
    return n * omega / c


def kz(crystal, role, q, omega_offset=0.0):
    """Longitudinal wave-vector component sqrt(k^2 - q^2), no paraxial expansion."""
    k = wave_number(crystal, role, omega_offset)
    q = np.asarray(q, dtype=float)
    if np.any(np.abs(q) > k):
        raise EvanescentError("|q| exceeds the wave number: evanescent mode")
    return np.sqrt((k - q) * (k + q))


def signal_band_edge(crystal):
    """Largest |omega| such that omega_s +- omega both lie in the ordinary Sellmeier range."""
    lo, hi = crystal.ordinary.valid_range
    w_hi = 2 * np.pi * c / lo - crystal.omega_s
    w_lo = crystal.omega_s - 2 * np.pi * c / hi
    return min(w_hi, w_lo)


# --------------------------------------------------------------------------
# derivatives


def richardson_derivative(func, x0, h0, order=1, rtol=1e-8, max_levels=10, atol=0.0):
    """Central-difference derivative of ``func`` at ``x0`` with Richardson extrapolation.

    The step halves each level and the Neville table is extended until two
    successive diagonal entries agree to ``rtol`` (relative) or ``atol``
    (absolute, for derivatives that may vanish).  Once rounding takes over
    the change grows again; the best diagonal entry seen so far is kept.
    Returns ``(value, achieved_rtol)``.
    """
    if order == 1:
        def diff(h):
            return (func(x0 + h) - func(x0 - h)) / (2 * h)
    elif order == 2:
        f0 = func(x0)

        def diff(h):
            return (func(x0 + h) - 2 * f0 + func(x0 - h)) / (h * h)
    else:
        raise ValueError("order must be 1 or 2")

    table = [[float(diff(h0))]]
    h = h0
    best, best_err = table[0][0], np.inf
    for level in range(1, max_levels):
        h = h / 2
        row = [float(diff(h))]
        for j in range(1, level + 1):
            factor = 4.0**j
            row.append((factor * row[j - 1] - table[level - 1][j - 1]) / (factor - 1))
        table.append(row)
        new, old = row[-1], table[level - 1][-1]
        err = abs(new - old) / max(abs(new), atol / rtol if atol else 0.0, np.finfo(float).tiny)
        if err < best_err:
            best, best_err = new, err
            if err < rtol:
                return best, best_err
        elif err > 2 * best_err:
            break
    if best_err < rtol:
        return best, best_err
    raise ConvergenceError(
        f"Richardson extrapolation stalled at relative change {best_err:.2e}",
        estimate=best,
        bound=best_err,
    )


def gvd_signal(crystal, rtol=1e-8, rel_step=0.02):
    """k_s'' = d^2 k_s / d omega^2 at degeneracy, in s^2/m."""
    h0 = rel_step * crystal.omega_s
    value, _ = richardson_derivative(
        lambda w: wave_number(crystal, Role.SIGNAL, w), 0.0, h0, order=2, rtol=rtol
    )
    return value


def group_delay_per_length(crystal, role, rtol=1e-8, rel_step=0.02):
    """dk/d omega (inverse group velocity) at the carrier, s/m."""
    h0 = rel_step * _carrier(crystal, role)
    value, _ = richardson_derivative(
        lambda w: wave_number(crystal, role, w), 0.0, h0, order=1, rtol=rtol
    )
    return value


def walkoff_angle(crystal, theta=None, rtol=1e-8):
    """Poynting walk-off rho = -(1/n) dn/dtheta of the pump at ``theta``."""
    theta = crystal.cut_angle if theta is None else float(theta)
    lam = crystal.pump_wavelength
    if theta <= 0 or theta >= np.pi / 2:
        # derivative vanishes on both principal axes; avoid stepping outside [0, pi/2]
        return 0.0
    h0 = 0.5 * min(theta, np.pi / 2 - theta, 0.05)
    # dn/dtheta -> 0 on the axes; judge convergence against the birefringence scale
    scale = abs(float(index_ordinary(crystal, lam)) - float(crystal.extraordinary.index(lam)))
    dn, _ = richardson_derivative(
        lambda th: index_extraordinary(crystal, lam, th), theta, h0, order=1, rtol=rtol,
        atol=rtol * scale,
    )
    return -dn / float(index_extraordinary(crystal, lam, theta))
