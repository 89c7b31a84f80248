"""
Command-line driver.

    xentangle pm-map        |V(q, w)| gain map
    xentangle xcorr         |psi(r, t)| map, on-axis and t = 0 cuts, peak widths
    xentangle coincidence   resolved vs position-integrated coincidence profiles
    xentangle filter-sweep  on-axis temporal profile for a list of aperture angles
    xentangle validate-pwp  plane-wave-pump validity report
    xentangle calibrate     fit the detection bandwidth to a target temporal FWHM
    xentangle show-config   print the resolved configuration

Every command reads the reference configuration unless ``--config`` is
given; single keys are overridden with ``--kebab-case`` flags.  Outputs are
CSV (or key = value text) with a ``#`` header holding units, the grid, a
config hash and the full resolved config.  Exit codes: 0 success, 2
configuration or I/O error, 3 numerical convergence failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import fwhm, pwp_validity, quadratic_psi
from .biphoton import (
    integrated_coincidence,
    integrated_coincidence_spectral,
    near_field,
    on_axis,
    parseval_residual,
    time_parity_residual,
)
from .config import add_override_flags, apply_overrides, load_config, reference_config
from .exceptions import ConfigError, ConvergenceError, DispersionError, PeakNotResolved
from .phasematch import quadratic_params
from .pipeline import (
    CUT_T,
    CUT_X,
    apply_filters,
    build_grid,
    calibrate_bandwidth,
    compute_amplitude,
    spatial_cut,
    temporal_cut,
)

EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3


# --------------------------------------------------------------------------
# output


def _header(command, config, units, grid=None):
    lines = [f"# xentangle {__version__} {command}"]
    lines.append("# units: " + "; ".join(f"{k}={v}" for k, v in units.items()))
    if grid is not None:
        lines.append("# grid: " + "; ".join(f"{k}={v!r}" for k, v in grid.describe().items()))
    lines.append(f"# config_sha256: {config.digest()}")
    lines.append("# config:")
    lines.extend(f"#   {line}".rstrip() for line in config.to_text().splitlines())
    return "\n".join(lines) + "\n"


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.12e}"


def write_csv(path, command, config, columns, units, data, grid=None):
    """``data`` is a sequence of equal-length columns."""
    cols = [np.asarray(c) for c in data]
    out = [_header(command, config, units, grid), ",".join(columns) + "\n"]
    for row in zip(*cols):
        out.append(",".join(_fmt(v) for v in row) + "\n")
    Path(path).write_text("".join(out))
    return path


def write_summary(path, command, config, rows, grid=None):
    """``rows`` are (metric, value, unit) triples."""
    names, values, units = zip(*rows)
    return write_csv(path, command, config, ["metric", "value", "unit"], {"value": "see unit"},
                     [list(names), list(values), list(units)], grid)


def write_report(path, command, config, items, units):
    body = "".join(f"{k} = {_fmt(v)}\n" for k, v in items.items())
    Path(path).write_text(_header(command, config, units) + body)
    return path


# --------------------------------------------------------------------------
# shared pipeline


class Run:
    def __init__(self, config):
        self.config = config
        self.crystal = config.crystal()
        self.spectral = config.spectral_filter()
        self.angular = config.angular_filter()
        self.grid = build_grid(
            self.crystal, config.n_q, config.n_omega,
            q_max=config.q_max_si, omega_max=config.omega_max_si,
            spectral=self.spectral, delta0_override=config.delta0_override,
        )
        self._raw = None

    @property
    def raw(self):
        if self._raw is None:
            self._raw = compute_amplitude(self.crystal, self.grid, self.config.gain,
                                          self.config.delta0_override)
        return self._raw

    def amplitude(self, angular="config"):
        angular = self.angular if angular == "config" else angular
        return apply_filters(self.raw, self.spectral, angular)

    def out(self, name):
        directory = Path(self.config.output_dir)
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {directory}: {exc.strerror}") from None
        return directory / name


def _width(profile, axis):
    try:
        m = fwhm(profile, axis)
        return m.fwhm, m.peak_value
    except PeakNotResolved:
        return float("nan"), float(np.max(profile, initial=0.0))


# --------------------------------------------------------------------------
# commands


def cmd_pm_map(run):
    cfg, grid = run.config, run.grid
    raw = np.abs(run.raw.values)
    filtered = np.abs(run.amplitude().values)
    qi = np.arange(0, grid.n_q, cfg.map_q_stride)
    wi = np.arange(0, grid.n_omega, cfg.map_omega_stride)
    w_idx, q_idx = np.meshgrid(wi, qi, indexing="ij")  # omega-major
    w_idx, q_idx = w_idx.ravel(), q_idx.ravel()
    path = write_csv(
        run.out("pm_map.csv"), "pm-map", cfg,
        ["omega_rad_per_fs", "q_rad_per_um", "abs_V", "abs_V_filtered"],
        {"omega_rad_per_fs": "rad/fs", "q_rad_per_um": "rad/um", "abs_V": "1",
         "abs_V_filtered": "1"},
        [grid.omega_nodes[w_idx] * 1e-15, grid.q_nodes[q_idx] * 1e-6,
         raw[q_idx, w_idx], filtered[q_idx, w_idx]],
        grid,
    )
    print(f"wrote {path} ({w_idx.size} rows)")


def cmd_xcorr(run):
    cfg, grid = run.config, run.grid
    amp = run.amplitude()
    field = near_field(amp)
    mag = np.abs(field.values)

    ri = np.flatnonzero(grid.r_nodes <= cfg.map_r_max_um * 1e-6)
    ti = np.flatnonzero(np.abs(grid.t_nodes) <= cfg.map_t_max_fs * 1e-15)
    t_idx, r_idx = np.meshgrid(ti, ri, indexing="ij")  # t-major
    t_idx, r_idx = t_idx.ravel(), r_idx.ravel()
    write_csv(
        run.out("xcorr_map.csv"), "xcorr", cfg, ["t_fs", "r_um", "abs_psi"],
        {"t_fs": "fs", "r_um": "um", "abs_psi": "1/(m^2 s)"},
        [grid.t_nodes[t_idx] * 1e15, grid.r_nodes[r_idx] * 1e6, mag[r_idx, t_idx]],
        grid,
    )

    t_cut = temporal_cut(amp)
    x_cut = spatial_cut(amp)
    t_cols = [CUT_T * 1e15, t_cut]
    x_cols = [CUT_X * 1e6, x_cut]
    names_t, names_x = ["t_fs", "abs_psi_sq"], ["x_um", "abs_psi_sq"]
    units = {"t_fs": "fs", "x_um": "um", "abs_psi_sq": "1/(m^4 s^2)",
             "quadratic_abs_psi_sq": "1/(m^4 s^2)", "quadratic_clamped": "flag"}
    if cfg.quadratic_oracle:
        params = quadratic_params(run.crystal, cfg.gain, cfg.delta0_override)
        floor = 1e-6 * (params.q0 * grid.r_max) ** 2
        qt, ct = quadratic_psi(params, np.zeros_like(CUT_T), CUT_T, h_floor=floor,
                               return_clamped=True)
        qx, cx = quadratic_psi(params, np.abs(CUT_X), np.zeros_like(CUT_X), h_floor=floor,
                               return_clamped=True)
        t_cols += [np.abs(qt) ** 2, ct]
        x_cols += [np.abs(qx) ** 2, cx]
        names_t += ["quadratic_abs_psi_sq", "quadratic_clamped"]
        names_x += ["quadratic_abs_psi_sq", "quadratic_clamped"]
    write_csv(run.out("xcorr_temporal.csv"), "xcorr", cfg, names_t, units, t_cols, grid)
    write_csv(run.out("xcorr_spatial.csv"), "xcorr", cfg, names_x, units, x_cols, grid)

    t_width, t_peak = _width(t_cut, CUT_T)
    x_width, x_peak = _width(x_cut, CUT_X)
    parity = time_parity_residual(field)
    path = write_summary(run.out("xcorr_summary.csv"), "xcorr", cfg, [
        ("temporal_fwhm", t_width * 1e15, "fs"),
        ("temporal_peak", t_peak, "1/(m^4 s^2)"),
        ("spatial_fwhm", x_width * 1e6, "um"),
        ("spatial_peak", x_peak, "1/(m^4 s^2)"),
        ("time_parity_residual", parity, "1"),
    ], grid)
    print(f"temporal FWHM {t_width * 1e15:.3f} fs, spatial FWHM {x_width * 1e6:.3f} um, "
          f"parity residual {parity:.2e}")
    print(f"wrote {path.parent}/xcorr_*.csv")


def cmd_coincidence(run):
    cfg, grid = run.config, run.grid
    amp = run.amplitude()
    resolved = np.abs(on_axis(amp)) ** 2
    spatial_side = integrated_coincidence(near_field(amp))
    spectral_side = integrated_coincidence_spectral(amp)
    write_csv(
        run.out("coincidence_profiles.csv"), "coincidence", cfg,
        ["t_fs", "resolved", "integrated_spatial", "integrated_spectral"],
        {"t_fs": "fs", "resolved": "1/(m^4 s^2)", "integrated_spatial": "1/(m^2 s^2)",
         "integrated_spectral": "1/(m^2 s^2)"},
        [grid.t_nodes * 1e15, resolved, spatial_side, spectral_side],
        grid,
    )
    r_width, _ = _width(temporal_cut(amp), CUT_T)
    i_width, _ = _width(spectral_side, grid.t_nodes)
    residual = parseval_residual(spatial_side, spectral_side)
    path = write_summary(run.out("coincidence_summary.csv"), "coincidence", cfg, [
        ("resolved_fwhm", r_width * 1e15, "fs"),
        ("integrated_fwhm", i_width * 1e15, "fs"),
        ("width_ratio", i_width / r_width if r_width > 0 else float("nan"), "1"),
        ("parseval_residual", residual, "1"),
    ], grid)
    print(f"resolved FWHM {r_width * 1e15:.3f} fs, integrated FWHM {i_width * 1e15:.2f} fs, "
          f"Parseval residual {residual:.2e}")
    print(f"wrote {path.parent}/coincidence_*.csv")


def cmd_filter_sweep(run):
    cfg = run.config
    alphas = sorted(cfg.alphas_deg)
    rows_alpha, rows_t, rows_val, widths, peaks = [], [], [], [], []
    for alpha in alphas:
        cut = temporal_cut(run.amplitude(cfg.angular_filter(alpha)))
        width, peak = _width(cut, CUT_T)
        widths.append(width * 1e15)
        peaks.append(peak)
        rows_alpha.append(np.full(CUT_T.size, alpha))
        rows_t.append(CUT_T * 1e15)
        rows_val.append(cut)
    write_csv(
        run.out("sweep_profiles.csv"), "filter-sweep", cfg, ["alpha_deg", "t_fs", "abs_psi_sq"],
        {"alpha_deg": "deg", "t_fs": "fs", "abs_psi_sq": "1/(m^4 s^2)"},
        [np.concatenate(rows_alpha), np.concatenate(rows_t), np.concatenate(rows_val)],
        run.grid,
    )
    path = write_csv(
        run.out("sweep_fwhm.csv"), "filter-sweep", cfg, ["alpha_deg", "fwhm_fs", "peak"],
        {"alpha_deg": "deg", "fwhm_fs": "fs", "peak": "1/(m^4 s^2)"},
        [alphas, widths, peaks], run.grid,
    )
    for alpha, width in zip(alphas, widths):
        print(f"alpha {alpha:6.2f} deg  FWHM {width:8.3f} fs")
    print(f"wrote {path}")


def cmd_validate_pwp(config):
    report = pwp_validity(config.crystal(), config.pump_waist_um * 1e-6,
                          config.pump_duration_fs * 1e-15, config.pwp_threshold)
    units = {"walkoff_angle_rad": "rad", "walkoff_shift_m": "m", "gvm_delay_s": "s",
             "pump_waist_m": "m", "pump_duration_s": "s", "ratio_space": "1",
             "ratio_time": "1", "threshold": "1"}
    directory = Path(config.output_dir)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {directory}: {exc.strerror}") from None
    path = write_report(directory / "pwp_report.txt", "validate-pwp", config,
                        report.as_dict(), units)
    print(f"walk-off shift {report.walkoff_shift * 1e6:.1f} um (ratio {report.ratio_space:.2f}, "
          f"{'pass' if report.space_ok else 'fail'}); GVM delay {report.gvm_delay * 1e12:.3f} ps "
          f"(ratio {report.ratio_time:.2f}, {'pass' if report.time_ok else 'fail'})")
    print(f"wrote {path}")


def cmd_calibrate(config, target_fs):
    crystal = config.crystal()
    bandwidth, achieved = calibrate_bandwidth(
        crystal, target_fwhm=target_fs * 1e-15, order=config.order, n_q=config.n_q,
        n_omega=config.n_omega, gain=config.gain, delta0_override=config.delta0_override,
    )
    directory = Path(config.output_dir)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {directory}: {exc.strerror}") from None
    fitted = config.replace(bandwidth_per_fs=bandwidth * 1e-15)
    path = write_summary(directory / "calibration.csv", "calibrate", fitted, [
        ("target_fwhm", target_fs, "fs"),
        ("achieved_fwhm", achieved * 1e15, "fs"),
        ("bandwidth", bandwidth * 1e-15, "rad/fs"),
    ])
    print(f"bandwidth_per_fs = {bandwidth * 1e-15!r}  (FWHM {achieved * 1e15:.5f} fs)")
    print(f"wrote {path}")


# --------------------------------------------------------------------------
# entry point


def build_parser():
    parser = argparse.ArgumentParser(prog="xentangle", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", metavar="PATH",
                       help="run configuration file (default: bundled reference)")
        add_override_flags(p)
        return p

    command("pm-map", "write the |V(q, w)| phase-matching map")
    command("xcorr", "write the |psi(r, t)| map, its cuts and peak widths")
    command("coincidence", "write resolved and position-integrated coincidence profiles")
    command("filter-sweep", "on-axis temporal profile for each aperture in alphas_deg")
    command("validate-pwp", "check the plane-wave-pump approximation")
    cal = command("calibrate", "fit the spectral bandwidth to a target on-axis FWHM")
    cal.add_argument("--target-fwhm-fs", type=float, default=4.4)
    command("show-config", "print the resolved configuration")
    return parser


def resolve_config(args):
    config = load_config(args.config) if args.config else reference_config()
    return apply_overrides(config, args)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        if args.command == "show-config":
            sys.stdout.write(config.to_text())
        elif args.command == "validate-pwp":
            cmd_validate_pwp(config)
        elif args.command == "calibrate":
            cmd_calibrate(config, args.target_fwhm_fs)
        else:
            handler = {
                "pm-map": cmd_pm_map,
                "xcorr": cmd_xcorr,
                "coincidence": cmd_coincidence,
                "filter-sweep": cmd_filter_sweep,
            }[args.command]
            handler(Run(config))
    except (ConfigError, DispersionError) as exc:
        print(f"xentangle: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"xentangle: I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"xentangle: numerical convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    return 0


if __name__ == "__main__":
    sys.exit(main())
