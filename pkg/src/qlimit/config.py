"""Run configuration: strict JSON documents, presets, and conversion to model objects.

Frequencies in the configuration are ordinary frequencies in Hz;
everything downstream works in rad/s.
"""
import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .interferometer import InterferometerParams
from .squeezing import FAMILIES, SqueezeProfile

TWO_PI = 2 * math.pi


class ConfigError(ValidationError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class DetectorConfig:
    mass_kg: float = 40.0
    arm_length_m: float = 4000.0
    power_w: float = 800e3
    laser_freq_hz: float = 3e14
    detuning_hz: float = 0.0
    gamma_hz: float = 100.0

    def params(self):
        return InterferometerParams(
            mass=self.mass_kg,
            arm_length=self.arm_length_m,
            power=self.power_w,
            laser_omega=TWO_PI * self.laser_freq_hz,
            detuning=TWO_PI * self.detuning_hz,
            gamma=TWO_PI * self.gamma_hz,
        )


@dataclass(frozen=True)
class SqueezeConfig:
    family: str = "constant"
    r: float = 0.0
    phi: float = 0.0
    corner_hz: float = 100.0

    def profile(self):
        return SqueezeProfile(r=self.r, phi=self.phi, family=self.family, corner=TWO_PI * self.corner_hz)


@dataclass(frozen=True)
class GridConfig:
    f_min_hz: float = 10.0
    f_max_hz: float = 10e3
    n_points: int = 600
    spacing: str = "log"

    def frequencies(self):
        if self.spacing == "log":
            return np.geomspace(self.f_min_hz, self.f_max_hz, self.n_points)
        return np.linspace(self.f_min_hz, self.f_max_hz, self.n_points)


@dataclass(frozen=True)
class ReadoutConfig:
    mode: str = "phase"
    theta: float = 0.0

    @property
    def theta_used(self):
        """Angle for the ``sqrt_sigma_phase`` column; ``None`` means per-frequency optimum."""
        return {"phase": 0.0, "fixed": self.theta, "optimal": None}[self.mode]


@dataclass(frozen=True)
class OutputConfig:
    path: str = None
    format: str = "csv"
    sided: str = "double"
    svg: bool = False


@dataclass(frozen=True)
class SingleShotConfig:
    r: float = 1.0
    phi: float = math.pi / 6
    theta: object = "opt"
    x_true: float = 0.0
    n_samples: int = 1_000_000
    workers: int = 1


@dataclass(frozen=True)
class RunConfig:
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    squeeze: SqueezeConfig = field(default_factory=SqueezeConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    readout: ReadoutConfig = field(default_factory=ReadoutConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 1729
    single_shot: SingleShotConfig = field(default_factory=SingleShotConfig)

    def __post_init__(self):
        validate(self)

    def replace(self, **sections):
        """Copy with whole sections or per-field section updates (``grid={"n_points": 2}``)."""
        kw = {}
        for name, value in sections.items():
            if isinstance(value, dict):
                value = _build(type(getattr(self, name)), {**_asdict(getattr(self, name)), **value}, name)
            kw[name] = value
        return dataclasses.replace(self, **kw)

    def to_dict(self):
        return _asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"


PRESETS = {
    "fig3-tuned": {"detector": {"detuning_hz": 0.0}},
    "fig3-detuned": {"detector": {"detuning_hz": 400.0}},
}


def preset(name):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return from_dict(PRESETS[name])


def _asdict(obj):
    return dataclasses.asdict(obj)


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _coerce(cls, name, value, where):
    default = next(f for f in dataclasses.fields(cls) if f.name == name).default
    path = f"{where}.{name}" if where else name
    if name == "theta" and cls is SingleShotConfig:
        if value == "opt" or _is_number(value):
            return value if isinstance(value, str) else float(value)
        raise ConfigError(f"{path} must be a number or 'opt', got {value!r}")
    if name == "path":
        if value is None or isinstance(value, str):
            return value
        raise ConfigError(f"{path} must be a string or null, got {value!r}")
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        raise ConfigError(f"{path} must be true or false, got {value!r}")
    if isinstance(default, int):
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise ConfigError(f"{path} must be an integer, got {value!r}")
    if isinstance(default, float):
        if _is_number(value) and math.isfinite(value):
            return float(value)
        raise ConfigError(f"{path} must be a finite number, got {value!r}")
    if isinstance(default, str):
        if isinstance(value, str):
            return value
        raise ConfigError(f"{path} must be a string, got {value!r}")
    return value


def _build(cls, data, where=""):
    if not isinstance(data, dict):
        raise ConfigError(f"section {where or '<root>'} must be a JSON object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        prefix = f"{where}." if where else ""
        raise ConfigError(f"unknown config key(s): {', '.join(prefix + k for k in unknown)}")
    kw = {}
    for f in dataclasses.fields(cls):
        if f.name not in data:
            continue
        value = data[f.name]
        sub = f.default_factory() if f.default_factory is not dataclasses.MISSING else None
        if dataclasses.is_dataclass(sub):
            kw[f.name] = _build(type(sub), value, f.name)
        else:
            kw[f.name] = _coerce(cls, f.name, value, where)
    return cls(**kw)


def from_dict(data):
    return _build(RunConfig, data)


def load(path):
    """Read a configuration file; errors name the file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return from_dict(data)


def _choice(path, value, options):
    if value not in options:
        raise ConfigError(f"{path} must be one of {list(options)}, got {value!r}")


def validate(cfg):
    g = cfg.grid
    if not g.f_min_hz > 0:
        raise ConfigError(f"grid.f_min_hz must be > 0, got {g.f_min_hz!r}")
    if not g.f_max_hz >= g.f_min_hz:
        raise ConfigError(f"grid.f_max_hz must be >= grid.f_min_hz, got {g.f_max_hz!r}")
    if g.n_points < 2:
        raise ConfigError(f"grid.n_points must be >= 2, got {g.n_points!r}")
    _choice("grid.spacing", g.spacing, ("log", "linear"))
    _choice("readout.mode", cfg.readout.mode, ("phase", "optimal", "fixed"))
    _choice("output.format", cfg.output.format, ("csv", "json"))
    _choice("output.sided", cfg.output.sided, ("single", "double"))
    _choice("squeeze.family", cfg.squeeze.family, FAMILIES)
    ss = cfg.single_shot
    if ss.r < 0:
        raise ConfigError(f"single_shot.r must be >= 0, got {ss.r!r}")
    if ss.n_samples < 2:
        raise ConfigError(f"single_shot.n_samples must be >= 2, got {ss.n_samples!r}")
    if ss.workers < 1:
        raise ConfigError(f"single_shot.workers must be >= 1, got {ss.workers!r}")
    for section, build in (("detector", cfg.detector.params), ("squeeze", cfg.squeeze.profile)):
        try:
            build()
        except ValidationError as exc:
            raise ConfigError(f"{section}: {exc}") from exc
