"""Experiment configuration files.

A config is a JSON object with a ``schema_version``. Every length (``path.L_p``,
``delta``, ``smoother.d``) is a multiple of the wavelength. Missing keys take
the defaults below, which match the usual 2.14 GHz simulation setup; unknown
keys are rejected.
"""
import json
import math
import typing
from dataclasses import asdict, dataclass, field, fields

from .errors import ParameterError
from .pathopt import AnnealingConfig
from .sim import FAMILIES, EnergyModel

SCHEMA_VERSION = 1


class ConfigError(ParameterError):
    pass


@dataclass(frozen=True)
class PathSection:
    family: str = "mcp"
    L_p: float = 1.5
    N: int = 25
    file: str | None = None
    # rescale optimized paths so their spline arc length equals L_p
    match_arc_length: bool = True


@dataclass(frozen=True)
class SmootherSection:
    d: float = 0.3828


@dataclass(frozen=True)
class ExperimentConfig:
    schema_version: int = SCHEMA_VERSION
    wavelength_m: float = 0.1402
    path: PathSection = field(default_factory=PathSection)
    delta: float = 0.05
    snr_db: float = 10.0
    noiseless: bool = False
    amplitude: float = 1.0
    smoother: SmootherSection = field(default_factory=SmootherSection)
    annealing: AnnealingConfig = field(default_factory=AnnealingConfig)
    energy: EnergyModel = field(default_factory=EnergyModel)
    trials: int = 10000
    master_seed: int = 0
    output_dir: str = "out"

    def __post_init__(self):
        validate(self)

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"


_SECTIONS = {"path": PathSection, "smoother": SmootherSection, "annealing": AnnealingConfig, "energy": EnergyModel}


def _coerce(where, name, value, kind):
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}{name}: expected an integer, got {value!r}")
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{where}{name}: expected true/false, got {value!r}")
        return value
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}{name}: expected a number, got {value!r}")
        return float(value)
    if kind == "float|None":
        return None if value is None else _coerce(where, name, value, "float")
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{where}{name}: expected a string, got {value!r}")
        return value
    if kind == "str|None":
        return None if value is None else _coerce(where, name, value, "str")
    raise AssertionError(kind)


def _kind(f):
    args = typing.get_args(f.type)
    if type(None) in args:
        base = next(a for a in args if a is not type(None))
        return base.__name__ + "|None"
    return f.type.__name__


def _build(cls, data, where=""):
    if not isinstance(data, dict):
        raise ConfigError(f"{where.rstrip('.') or 'config'}: expected an object, got {type(data).__name__}")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"{where.rstrip('.') or 'config'}: unknown key(s) {', '.join(unknown)}")
    kwargs = {}
    for name, value in data.items():
        if name in _SECTIONS and cls is ExperimentConfig:
            kwargs[name] = _build(_SECTIONS[name], value, f"{name}.")
        else:
            kwargs[name] = _coerce(where, name, value, _kind(known[name]))
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except ParameterError as exc:
        raise ConfigError(f"{where.rstrip('.') or 'config'}: {exc}") from exc


def validate(cfg):
    if cfg.schema_version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {cfg.schema_version}; expected {SCHEMA_VERSION}")
    checks = [
        (cfg.wavelength_m > 0, "wavelength_m must be positive"),
        (cfg.path.family in FAMILIES, f"path.family must be one of {FAMILIES}"),
        (cfg.path.L_p > 0, "path.L_p must be positive"),
        (cfg.path.N >= 2, "path.N must be at least 2"),
        (cfg.path.family != "file" or bool(cfg.path.file), "path.file is required for family 'file'"),
        (cfg.delta > 0, "delta must be positive"),
        (cfg.noiseless or math.isfinite(cfg.snr_db), "snr_db must be finite unless noiseless"),
        (cfg.amplitude > 0, "amplitude must be positive"),
        (cfg.smoother.d > 0, "smoother.d must be positive"),
        (cfg.trials >= 1, "trials must be at least 1"),
        (cfg.master_seed >= 0, "master_seed must be a nonnegative 64-bit integer"),
        (cfg.master_seed < 2**64, "master_seed must be a nonnegative 64-bit integer"),
    ]
    for ok, msg in checks:
        if not ok:
            raise ConfigError(msg)


def from_dict(data):
    return _build(ExperimentConfig, data)


def load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return from_dict(data)
