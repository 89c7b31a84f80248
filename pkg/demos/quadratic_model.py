"""
The quadratic model near the X
==============================

Expanding the phase mismatch to second order in q and w gives a closed
form for psi that depends only on H = q0^2 r^2 - Omega0^2 t^2.  It is
constant on hyperboloids and diverges as 1/sqrt|H| on the asymptotes.
Here it is compared with the full-dispersion field inside the region where
the expansion holds.

    python demos/quadratic_model.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from xentangle.analytics import hyperbola_level, quadratic_psi, s_integral
from xentangle.config import reference_config
from xentangle.phasematch import quadratic_params
from xentangle.pipeline import quadratic_comparison_box, quadratic_shape_correlation

out = Path("demo_output")
out.mkdir(exist_ok=True)

cfg = reference_config()
crystal = cfg.crystal()
params = quadratic_params(crystal, cfg.gain)

# %%
# The 1/sqrt|H| divergence
# ------------------------

h = np.logspace(-4, 1, 40)
for sign, style in ((1, "-"), (-1, "--")):
    s = np.array([abs(s_integral(sign * x, 0.0)) for x in h])
    plt.loglog(h, s, style, label=f"H {'>' if sign > 0 else '<'} 0")
plt.loglog(h, 2 * np.sqrt(np.pi / h), "k:", lw=0.8, label="2 sqrt(pi/|H|)")
plt.xlabel("|H|")
plt.legend()
plt.savefig(out / "divergence.png", dpi=150, bbox_inches="tight")
plt.close()

# %%
# Map inside the validity box
# ---------------------------
# The box holds the arms fed by frequencies within 2% of degeneracy.  The
# asymptotes themselves are clamped to a small floor.

r_box, t_box = quadratic_comparison_box(crystal, params)
r = np.linspace(0, r_box, 81)
t = np.linspace(-t_box, t_box, 161)
rr, tt = np.meshgrid(r, t, indexing="ij")
floor = 1e-3 * (params.q0 * r_box) ** 2
psi = np.abs(quadratic_psi(params, rr, tt, h_floor=floor))

fig, ax = plt.subplots(figsize=(6, 4))
ax.pcolormesh(t * 1e15, r * 1e6, psi, shading="auto", cmap="magma")
ax.contour(t * 1e15, r * 1e6, hyperbola_level(params, rr, tt), levels=[0], colors="c",
           linewidths=0.6)
ax.set_xlabel("t (fs)")
ax.set_ylabel("r (um)")
fig.savefig(out / "quadratic_map.png", dpi=150, bbox_inches="tight")

# %%
# Agreement with the full field
# -----------------------------
# Pearson correlation of |psi| on the box, away from the band-limit zone
# around the asymptotes.

corr, n = quadratic_shape_correlation(crystal, cfg.bandwidth_per_fs * 1e15, gain=cfg.gain)
print(f"shape correlation {corr:.4f} on {n} points")
