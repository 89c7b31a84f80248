"""
Space-time (X-shaped) biphoton correlations of type-I parametric
down-conversion: crystal dispersion, phase matching, the near-field
biphoton amplitude, detection filters and the quadratic analytic model.
"""

__version__ = "0.1.0"

from .analytics import fwhm, pwp_validity, quadratic_psi, ridge_slope
from .biphoton import integrated_coincidence, near_field, on_axis, spatial_profile
from .dispersion import bundled_crystal, load_crystal, parse_crystal
from .filters import AngularFilter, SpectralFilter, apply_angular, apply_spectral
from .grid import make_grid
from .phasematch import degeneracy_angle, quadratic_params, spectral_amplitude

__all__ = [
    "AngularFilter",
    "SpectralFilter",
    "apply_angular",
    "apply_spectral",
    "bundled_crystal",
    "degeneracy_angle",
    "fwhm",
    "integrated_coincidence",
    "load_crystal",
    "make_grid",
    "near_field",
    "on_axis",
    "parse_crystal",
    "pwp_validity",
    "quadratic_params",
    "quadratic_psi",
    "ridge_slope",
    "spatial_profile",
    "spectral_amplitude",
]
