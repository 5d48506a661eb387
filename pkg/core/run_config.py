"""
Per-run configuration: one JSON document per run, parsed into dataclass records.
Unknown keys are rejected so that a typo never silently falls back to a default.
"""
import json
import logging
from dataclasses import dataclass, field, fields, is_dataclass
from typing import Optional

import config
from core.errors import ConfigError, ValidationError
from core.experiments import ARDatasetSpec, TrainConfig

logger = logging.getLogger(__name__)

TRAIN_MODES = ("single", "compare", "k_init_sweep")


def build_record(cls, data: dict, where: str = ""):
    """Instantiate dataclass `cls` from `data`, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError(f"{where or cls.__name__} must be a JSON object")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"Unknown keys in {where or cls.__name__}: {sorted(unknown)}")
    try:
        return cls(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid {where or cls.__name__}: {e}")
    except TypeError as e:
        raise ConfigError(f"Malformed {where or cls.__name__}: {e}")


@dataclass(frozen=True)
class LossRunConfig:
    """Cartesian sweep over (S, K, rho, alpha) of shift-K filters, or a fixed filter from `params`."""

    S: list = field(default_factory=lambda: [51])
    K: list = field(default_factory=lambda: [500])
    rho: list = field(default_factory=lambda: [0.0])
    alpha: list = field(default_factory=lambda: [1.0])
    params: Optional[str] = None
    nodes: Optional[int] = None
    k_max: Optional[int] = None
    out: str = "loss.csv"

    def __post_init__(self):
        for name in ("S", "K", "rho", "alpha"):
            value = getattr(self, name)
            if not isinstance(value, list) or not value:
                raise ConfigError(f"'{name}' must be a nonempty list")
        if any(r >= 1 or r < 0 for r in self.rho):
            raise ConfigError(f"Every rho must lie in [0, 1), got {self.rho}")


@dataclass(frozen=True)
class WindowRunConfig:
    S: int = 51
    K: int = 500
    alpha: float = 1.0
    omega_min: float = -75.0
    omega_max: float = 75.0
    points: int = 601
    omegas: Optional[list] = None
    out: str = "window.csv"

    def __post_init__(self):
        if self.omegas is None and (self.points < 2 or self.omega_max <= self.omega_min):
            raise ConfigError("Need points >= 2 and omega_max > omega_min")


@dataclass(frozen=True)
class TrainRunConfig:
    mode: str = "single"
    train: TrainConfig = field(default_factory=TrainConfig)
    data: ARDatasetSpec = field(default_factory=lambda: ARDatasetSpec(
        config.DESK_SEQUENCE_LENGTH, config.DESK_T_STAR, 0.7, config.DESK_NUM_SAMPLES))
    rhos: list = field(default_factory=lambda: [0.0, 0.2, 0.4, 0.6, 0.8])
    seeds: list = field(default_factory=lambda: [0, 1, 2])
    k_inits: list = field(default_factory=lambda: [62, 125, 250, 500, 1000])
    out: str = "train"

    def __post_init__(self):
        if self.mode not in TRAIN_MODES:
            raise ConfigError(f"Unknown train mode: {self.mode}. Use one of {TRAIN_MODES}")
        if any(r >= 1 or r < 0 for r in self.rhos):
            raise ConfigError(f"Every rho must lie in [0, 1), got {self.rhos}")


@dataclass(frozen=True)
class VerifyRunConfig:
    seed: int = 0
    perturb_cauchy: float = 0.0
    checks: Optional[list] = None
    out: str = "verify_report.json"


NESTED = {TrainRunConfig: {"train": TrainConfig, "data": ARDatasetSpec}}


def parse_run_config(cls, data: dict):
    data = dict(data)
    for key, record in NESTED.get(cls, {}).items():
        if key in data:
            data[key] = build_record(record, data[key], f"{cls.__name__}.{key}")
    return build_record(cls, data)


def load_run_config(cls, path: Optional[str] = None):
    """Parse the JSON document at `path` into `cls`; defaults when no path is given."""
    if path is None:
        return cls()
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}")
    logger.debug(f"Loaded {cls.__name__} from {path}")
    return parse_run_config(cls, data)


def as_dict(record) -> dict:
    """Plain-JSON view of a record, nested dataclasses included."""
    out = {}
    for f in fields(record):
        value = getattr(record, f.name)
        out[f.name] = as_dict(value) if is_dataclass(value) else value
    return out
