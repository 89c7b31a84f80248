"""
Sampling lattices and the containers that live on them.

Radial nodes follow the quasi-discrete Hankel scheme: with j_n the zeros of
J0 and S = j_{N+1},

    q_n = j_n / R,     r_n = j_n / Q,     R * Q = S,

so the q and r lattices are conjugate.  Frequencies sit on a uniform grid
offset by half a step, w_j = (j - (N-1)/2) dw, which contains -w_j whenever it
contains w_j.  The conjugate times t_m = (m - (N-1)/2) dt, dt = 2 pi / (N dw),
are symmetric in the same way.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import j1, jn_zeros

from .exceptions import GridMismatchError


@dataclass(frozen=True, eq=False)
class SimGrid:
    n_q: int
    n_omega: int
    q_max: float
    omega_max: float
    carrier: float  # signal carrier omega_s, rad/s
    bessel_zeros: np.ndarray = field(repr=False)
    j_next: float = field(repr=False)  # S = j_{N+1}

    @property
    def r_max(self):
        return self.j_next / self.q_max

    @property
    def q_nodes(self):
        return self.bessel_zeros / self.r_max

    @property
    def r_nodes(self):
        return self.bessel_zeros / self.q_max

    @property
    def d_omega(self):
        return 2 * self.omega_max / self.n_omega

    @property
    def omega_nodes(self):
        return (np.arange(self.n_omega) - (self.n_omega - 1) / 2) * self.d_omega

    @property
    def dt(self):
        return 2 * np.pi / (self.n_omega * self.d_omega)

    @property
    def t_nodes(self):
        return (np.arange(self.n_omega) - (self.n_omega - 1) / 2) * self.dt

    @property
    def q_weights(self):
        """Weights w_k with  int_0^Q f(q) q dq / (2 pi)  ~  sum_k w_k f(q_k)."""
        return 1.0 / (np.pi * self.r_max**2 * j1(self.bessel_zeros) ** 2)

    @property
    def r_weights(self):
        """Weights with  2 pi int_0^R f(r) r dr  ~  sum_k w_k f(r_k)."""
        return 4 * np.pi / (self.q_max**2 * j1(self.bessel_zeros) ** 2)

    def same_as(self, other):
        return (
            self.n_q == other.n_q
            and self.n_omega == other.n_omega
            and self.q_max == other.q_max
            and self.omega_max == other.omega_max
            and self.carrier == other.carrier
        )

    def describe(self):
        return {
            "n_q": self.n_q,
            "n_omega": self.n_omega,
            "q_max_rad_per_m": self.q_max,
            "omega_max_rad_per_s": self.omega_max,
            "r_max_m": self.r_max,
            "dt_s": self.dt,
            "carrier_rad_per_s": self.carrier,
        }


def make_grid(n_q, n_omega, q_max, omega_max, carrier):
    if n_q < 2 or n_omega < 2:
        raise ValueError("grids need at least two nodes per axis")
    if q_max <= 0 or omega_max <= 0:
        raise ValueError("grid extents must be positive")
    zeros = jn_zeros(0, int(n_q) + 1)
    zeros.flags.writeable = False
    return SimGrid(
        n_q=int(n_q),
        n_omega=int(n_omega),
        q_max=float(q_max),
        omega_max=float(omega_max),
        carrier=float(carrier),
        bessel_zeros=zeros[:-1],
        j_next=float(zeros[-1]),
    )


@dataclass(frozen=True, eq=False)
class SpectralAmplitude:
    """V(q_i, w_j); rows are q, columns are omega."""

    grid: SimGrid
    values: np.ndarray
    gain: float

    def __post_init__(self):
        if self.values.shape != (self.grid.n_q, self.grid.n_omega):
            raise GridMismatchError(
                f"values of shape {self.values.shape} do not match grid "
                f"({self.grid.n_q}, {self.grid.n_omega})"
            )

    def replace(self, values):
        return SpectralAmplitude(self.grid, values, self.gain)

    def __mul__(self, scale):
        return SpectralAmplitude(self.grid, self.values * scale, self.gain * scale)

    __rmul__ = __mul__

    def __add__(self, other):
        check_same_grid(self.grid, other.grid)
        return SpectralAmplitude(self.grid, self.values + other.values, self.gain + other.gain)


@dataclass(frozen=True, eq=False)
class BiphotonField:
    """psi_pw(r_i, t_j) in m^-2 s^-1; rows are r, columns are t."""

    grid: SimGrid
    values: np.ndarray


def check_same_grid(a, b):
    if not a.same_as(b):
        raise GridMismatchError("operands live on different grids")
