"""
Run configuration: a key/value text file in the same format as the crystal
files, one section per concern.

    crystal_file = bundled:bbo
    gain = 0.001
    output_dir = out

    [grid]
    n_q = 1024
    n_omega = 4096
    q_max_per_um = auto
    omega_max_per_fs = auto

    [filter.spectral]
    bandwidth_per_fs = 0.7626036245679758
    order = 8
    center_offset_per_fs = 0.0

    [filter.angular]
    alpha_max_deg = off
    mapping = frequency

    [run]
    ...

Values are stored in the file units (um, fs, deg); the ``*_si`` helpers
convert.  Every key can be overridden from the command line with a
kebab-case flag of the same name (``--omega-max-per-fs``).
"""

import configparser
import dataclasses
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dispersion import bundled_crystal, load_crystal
from .exceptions import ConfigError
from .filters import AngularFilter, SpectralFilter

BUNDLED_PREFIX = "bundled:"
_OFF = ("off", "none", "auto", "inf")


# value codecs: parse(text) -> python value, format(value) -> text


def _parse_float(text):
    return float(text)


def _parse_opt_float(text):
    return None if text.strip().lower() in _OFF else float(text)


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _fmt_float(v):
    return repr(float(v))


def _fmt_opt(word):
    def fmt(v):
        return word if v is None else repr(float(v))
    return fmt


CODECS = {
    "int": (int, str),
    "float": (_parse_float, _fmt_float),
    "auto": (_parse_opt_float, _fmt_opt("auto")),
    "off": (_parse_opt_float, _fmt_opt("off")),
    "none": (_parse_opt_float, _fmt_opt("none")),
    "bool": (_parse_bool, lambda v: "true" if v else "false"),
    "floats": (_parse_floats, lambda v: ", ".join(repr(float(x)) for x in v)),
    "str": (str.strip, str),
}

# (section, key, codec); section "" is the top level.  Order is the file order.
KEYS = (
    ("", "crystal_file", "str"),
    ("", "gain", "float"),
    ("", "output_dir", "str"),
    ("grid", "n_q", "int"),
    ("grid", "n_omega", "int"),
    ("grid", "q_max_per_um", "auto"),
    ("grid", "omega_max_per_fs", "auto"),
    ("filter.spectral", "bandwidth_per_fs", "off"),
    ("filter.spectral", "order", "int"),
    ("filter.spectral", "center_offset_per_fs", "float"),
    ("filter.angular", "alpha_max_deg", "off"),
    ("filter.angular", "mapping", "str"),
    ("run", "delta0_override", "none"),
    ("run", "pump_waist_um", "float"),
    ("run", "pump_duration_fs", "float"),
    ("run", "pwp_threshold", "float"),
    ("run", "alphas_deg", "floats"),
    ("run", "quadratic_oracle", "bool"),
    ("run", "map_q_stride", "int"),
    ("run", "map_omega_stride", "int"),
    ("run", "map_r_max_um", "float"),
    ("run", "map_t_max_fs", "float"),
)


@dataclass(frozen=True)
class RunConfig:
    crystal_file: str = "bundled:bbo"
    gain: float = 1e-3
    output_dir: str = "out"
    n_q: int = 1024
    n_omega: int = 4096
    q_max_per_um: float | None = None
    omega_max_per_fs: float | None = None
    bandwidth_per_fs: float | None = None
    order: int = 8
    center_offset_per_fs: float = 0.0
    alpha_max_deg: float | None = None
    mapping: str = "frequency"
    delta0_override: float | None = None
    pump_waist_um: float = 3000.0
    pump_duration_fs: float = 1e6
    pwp_threshold: float = 10.0
    alphas_deg: tuple = field(default=(1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 20.0, 90.0))
    quadratic_oracle: bool = False
    map_q_stride: int = 8
    map_omega_stride: int = 8
    map_r_max_um: float = 100.0
    map_t_max_fs: float = 150.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.gain >= 0:
            raise ConfigError("gain must be >= 0")
        for name in ("n_q", "n_omega", "map_q_stride", "map_omega_stride", "order"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if self.n_omega % 2:
            raise ConfigError("n_omega must be even")
        for name in ("q_max_per_um", "omega_max_per_fs", "bandwidth_per_fs", "alpha_max_deg"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(f"{name} must be positive (or auto/off)")
        for name in ("pump_waist_um", "pump_duration_fs", "pwp_threshold",
                     "map_r_max_um", "map_t_max_fs"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.order % 2 or self.order < 2:
            raise ConfigError("order must be an even integer >= 2")
        if self.mapping not in ("frequency", "degenerate"):
            raise ConfigError(f"mapping must be 'frequency' or 'degenerate', got {self.mapping!r}")
        if not self.alphas_deg or any(not a > 0 for a in self.alphas_deg):
            raise ConfigError("alphas_deg needs at least one positive angle")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    # ---- physics objects

    def crystal(self):
        if self.crystal_file.startswith(BUNDLED_PREFIX):
            name = self.crystal_file[len(BUNDLED_PREFIX):]
            try:
                return bundled_crystal(name)
            except ConfigError:
                raise ConfigError(f"no bundled crystal named {name!r}") from None
        path = Path(self.crystal_file)
        if not path.is_file():
            raise ConfigError(f"crystal file not found: {path}")
        return load_crystal(path)

    def spectral_filter(self):
        if self.bandwidth_per_fs is None:
            return None
        return SpectralFilter(
            bandwidth=self.bandwidth_per_fs * 1e15,
            order=self.order,
            center_offset=self.center_offset_per_fs * 1e15,
        )

    def angular_filter(self, alpha_deg=None):
        alpha = self.alpha_max_deg if alpha_deg is None else alpha_deg
        if alpha is None:
            return None
        return AngularFilter(alpha_max=float(np.radians(alpha)), mapping=self.mapping)

    @property
    def q_max_si(self):
        return None if self.q_max_per_um is None else self.q_max_per_um * 1e6

    @property
    def omega_max_si(self):
        return None if self.omega_max_per_fs is None else self.omega_max_per_fs * 1e15

    # ---- serialization

    def to_text(self):
        lines = []
        current = ""
        for section, key, codec in KEYS:
            if section != current:
                lines.append("")
                lines.append(f"[{section}]")
                current = section
            lines.append(f"{key} = {CODECS[codec][1](getattr(self, key))}")
        return "\n".join(lines) + "\n"

    def digest(self):
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def parse_config(text):
    parser = configparser.ConfigParser(
        comment_prefixes=("#", ";"), inline_comment_prefixes=("#",), interpolation=None
    )
    try:
        parser.read_string("[__top__]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    known = {(s or "__top__", k): (k, codec) for s, k, codec in KEYS}
    values = {}
    for section in parser.sections():
        for key, raw in parser[section].items():
            if (section, key) not in known:
                where = "top level" if section == "__top__" else f"[{section}]"
                raise ConfigError(f"unknown config key {key!r} at {where}")
            name, codec = known[(section, key)]
            try:
                values[name] = CODECS[codec][0](raw)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from None
    return RunConfig(**values)


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    return parse_config(text)


def reference_config():
    """The reference BBO run with the frozen detection bandwidth."""
    return load_config(Path(__file__).parent / "data" / "reference.cfg")


def flag_name(key):
    return "--" + key.replace("_", "-")


def add_override_flags(parser):
    """One ``--kebab-case`` option per config key, all defaulting to 'not given'."""
    group = parser.add_argument_group("config overrides")
    for _, key, _ in KEYS:
        group.add_argument(flag_name(key), dest=f"set_{key}", metavar="VALUE", default=None)


def apply_overrides(config, namespace):
    changes = {}
    for _, key, codec in KEYS:
        raw = getattr(namespace, f"set_{key}", None)
        if raw is None:
            continue
        try:
            changes[key] = CODECS[codec][0](raw)
        except ValueError as exc:
            raise ConfigError(f"{flag_name(key)}: {exc}") from None
    return config.replace(**changes) if changes else config
