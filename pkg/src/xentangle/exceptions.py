"""Exception types raised across the package."""


class DispersionError(ValueError):
    """Wavelength or frequency outside the Sellmeier validity range."""


class EvanescentError(ValueError):
    """Transverse wave vector exceeds the wave number (no propagating mode)."""


class ConvergenceError(RuntimeError):
    """A numerical procedure did not reach its tolerance.

    ``estimate`` and ``bound`` hold the last value and its error bound when
    they are meaningful.
    """

    def __init__(self, message, estimate=None, bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound


class GridMismatchError(ValueError):
    """Samples or filters do not live on the expected grid."""


class PeakNotResolved(ValueError):
    """No half-maximum crossing on one side of the peak."""


class RidgeNotDetected(ValueError):
    """No off-axis X arm could be located in the field."""


class ConfigError(ValueError):
    """Invalid run or crystal configuration."""
