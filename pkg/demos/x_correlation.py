"""
The X-shaped biphoton correlation
=================================

Builds the reference BBO amplitude V(q, w), looks at its X-shaped
phase-matching map, then transforms to the crystal output plane and measures
how tightly the photon pair is localized in space and time.

Run from the repository root:

    python demos/x_correlation.py

Figures go to ``demo_output/``.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from xentangle.biphoton import near_field
from xentangle.config import reference_config
from xentangle.phasematch import degeneracy_angle, quadratic_params
from xentangle.pipeline import (
    CUT_T,
    CUT_X,
    build_grid,
    compute_amplitude,
    spatial_cut,
    temporal_cut,
)
from xentangle.analytics import fwhm

out = Path("demo_output")
out.mkdir(exist_ok=True)

# %%
# The crystal and its collinear degeneracy
# ----------------------------------------
# The bundled BBO file carries the Sellmeier data, the 352 nm pump and the
# 4 mm length.  The cut angle is solved so that the degenerate signal and
# idler are phase matched collinearly.

cfg = reference_config()
crystal = cfg.crystal()
print(f"degeneracy angle {np.degrees(degeneracy_angle(crystal)):.4f} deg")

params = quadratic_params(crystal, cfg.gain)
print(f"quadratic model: Delta0 = {params.delta0:.4f}, Omega0 = {params.omega0:.4e} rad/s, "
      f"q0 = {params.q0:.4e} rad/m")

# %%
# Phase-matching map
# ------------------
# |V(q, w)| on the default grid.  The bright band is the X: large transverse
# wave vectors are phase matched at large frequency offsets.

spectral = cfg.spectral_filter()
grid = build_grid(crystal, cfg.n_q, cfg.n_omega, spectral=spectral)
raw = compute_amplitude(crystal, grid, cfg.gain)
amp = raw.replace(raw.values * spectral.transmission(grid.omega_nodes)[None, :])

w = grid.omega_nodes * 1e-15
q = grid.q_nodes * 1e-6
fig, ax = plt.subplots(figsize=(6, 4))
ax.pcolormesh(w[::4], q[::2], np.abs(raw.values[::2, ::4]), shading="auto", cmap="magma")
ax.axvline(-spectral.bandwidth * 1e-15, color="w", ls="--", lw=0.8)
ax.axvline(spectral.bandwidth * 1e-15, color="w", ls="--", lw=0.8)
ax.set_xlabel("frequency offset (rad/fs)")
ax.set_ylabel("q (rad/um)")
fig.savefig(out / "pm_map.png", dpi=150, bbox_inches="tight")

# %%
# Near field
# ----------
# The Hankel transform in q and the FFT in w give psi(r, t).  Its modulus is
# an X whose arms follow t = +/- (q0/Omega0) r near the origin.

field = near_field(amp)
r = grid.r_nodes * 1e6
t = grid.t_nodes * 1e15
sel_r = r < 60
sel_t = np.abs(t) < 80
mag = np.abs(field.values[np.ix_(sel_r, sel_t)])

fig, ax = plt.subplots(figsize=(6, 4))
ax.pcolormesh(t[sel_t], r[sel_r], mag, shading="auto", cmap="magma", vmax=0.1 * mag.max())
ax.plot(t[sel_t], np.abs(t[sel_t]) * 1e-15 / params.asymptote_slope * 1e6, "c:", lw=0.8)
ax.set_ylim(0, r[sel_r].max())
ax.set_xlabel("t (fs)")
ax.set_ylabel("r (um)")
fig.savefig(out / "xcorr_map.png", dpi=150, bbox_inches="tight")

# %%
# Cuts through the origin
# -----------------------

t_cut = temporal_cut(amp)
x_cut = spatial_cut(amp)
print(f"temporal FWHM {fwhm(t_cut, CUT_T).fwhm * 1e15:.2f} fs")
print(f"spatial FWHM  {fwhm(x_cut, CUT_X).fwhm * 1e6:.2f} um")

fig, (a, b) = plt.subplots(1, 2, figsize=(8, 3))
a.plot(CUT_T * 1e15, t_cut / t_cut.max())
a.set_xlim(-20, 20)
a.set_xlabel("t (fs)")
b.plot(CUT_X * 1e6, x_cut / x_cut.max())
b.set_xlim(-10, 10)
b.set_xlabel("x (um)")
fig.savefig(out / "xcorr_cuts.png", dpi=150, bbox_inches="tight")
