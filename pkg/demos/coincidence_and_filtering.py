"""
Resolved versus integrated coincidences, and a far-field aperture
=================================================================

A detector that does not resolve where the photons arrive integrates
|psi(x, t)|^2 over the output plane, and the few-fs peak becomes a ~100 fs
one.  Cutting the angular spectrum with an aperture also cuts the frequency
bandwidth, so the resolved peak broadens too.

    python demos/coincidence_and_filtering.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from xentangle.analytics import fwhm
from xentangle.biphoton import (
    integrated_coincidence,
    integrated_coincidence_spectral,
    near_field,
    on_axis,
    parseval_residual,
)
from xentangle.config import reference_config
from xentangle.filters import apply_angular
from xentangle.pipeline import CUT_T, build_grid, compute_amplitude, temporal_cut

out = Path("demo_output")
out.mkdir(exist_ok=True)

cfg = reference_config()
crystal = cfg.crystal()
spectral = cfg.spectral_filter()
grid = build_grid(crystal, cfg.n_q, cfg.n_omega, spectral=spectral)
raw = compute_amplitude(crystal, grid, cfg.gain)
amp = raw.replace(raw.values * spectral.transmission(grid.omega_nodes)[None, :])
t = grid.t_nodes

# %%
# Two ways to integrate
# ---------------------
# The integral over the output plane can be done on psi(r, t) or, by
# Parseval, on V(q, t).  They should agree to rounding.

spatial_side = integrated_coincidence(near_field(amp))
spectral_side = integrated_coincidence_spectral(amp)
print(f"Parseval residual {parseval_residual(spatial_side, spectral_side):.1e}")

resolved = np.abs(on_axis(amp)) ** 2
w_res = fwhm(temporal_cut(amp), CUT_T).fwhm
w_int = fwhm(spectral_side, t).fwhm
print(f"resolved {w_res * 1e15:.2f} fs, integrated {w_int * 1e15:.1f} fs")

fig, ax = plt.subplots(figsize=(6, 3.5))
ax.plot(t * 1e15, resolved / resolved.max(), label="on axis")
ax.plot(t * 1e15, spectral_side / spectral_side.max(), label="integrated over x")
ax.set_xlim(-300, 300)
ax.set_xlabel("t (fs)")
ax.legend()
fig.savefig(out / "coincidence.png", dpi=150, bbox_inches="tight")

# %%
# Aperture sweep
# --------------
# A hard stop in the far field passes q <= (w_s + w)/c sin(alpha_max).

fig, ax = plt.subplots(figsize=(6, 3.5))
for alpha in (1.0, 2.0, 4.0, 90.0):
    filtered = amp
    angular = cfg.angular_filter(alpha)
    if not angular.all_pass:
        filtered = apply_angular(amp, angular)
    cut = temporal_cut(filtered)
    print(f"alpha_max {alpha:5.1f} deg: FWHM {fwhm(cut, CUT_T).fwhm * 1e15:6.2f} fs")
    ax.plot(CUT_T * 1e15, cut / cut.max(), label=f"{alpha:g} deg")
ax.set_xlim(-50, 50)
ax.set_xlabel("t (fs)")
ax.legend()
fig.savefig(out / "aperture_sweep.png", dpi=150, bbox_inches="tight")
