import numpy as np
import pytest

from xentangle.dispersion import bundled_crystal
from xentangle.filters import SpectralFilter
from xentangle.phasematch import quadratic_params
from xentangle.pipeline import build_grid, compute_amplitude

# detection bandwidth frozen in the reference configuration, rad/s
FROZEN_BANDWIDTH = 0.7626036245679757e15


@pytest.fixture(scope="session")
def crystal():
    return bundled_crystal()


@pytest.fixture(scope="session")
def params(crystal):
    return quadratic_params(crystal)


@pytest.fixture(scope="session")
def small_amplitude(crystal):
    """A coarse filtered amplitude, cheap enough for structural tests."""
    spectral = SpectralFilter(FROZEN_BANDWIDTH)
    grid = build_grid(crystal, n_q=256, n_omega=512, spectral=spectral)
    amp = compute_amplitude(crystal, grid)
    return amp.replace(amp.values * spectral.transmission(grid.omega_nodes)[None, :])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# ---- acceptance report: one line per criterion, repeated at the end of the run

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    def log(line):
        print(line)
        _ACCEPTANCE_LINES.append(line)
    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
