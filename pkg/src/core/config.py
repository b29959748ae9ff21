"""
Application settings: tolerances, grids and worker counts for the
renormalization engines, loaded from config.yaml.
"""
import logging
from dataclasses import dataclass, field, fields, asdict
from pathlib import Path
from typing import Any, Dict, Type, TypeVar

import yaml

from .errors import ConfigError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _section_from_dict(cls: Type[T], data: Dict[str, Any], section: str) -> T:
    """Build one settings dataclass, coercing numbers and skipping unknown keys."""
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"Section '{section}' must be a mapping, got {type(data).__name__}")

    known = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            logger.warning(f"Ignoring unknown setting {section}.{key}")
            continue
        default = getattr(cls(), key)
        try:
            if isinstance(default, bool):
                kwargs[key] = bool(value)
            elif isinstance(default, int):
                kwargs[key] = int(float(value))
            elif isinstance(default, float):
                kwargs[key] = float(value)
            else:
                kwargs[key] = str(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid value for {section}.{key}: {value!r} ({e})")
    return cls(**kwargs)


@dataclass
class LoggingSettings:
    """Logging level and line format."""
    level: str = "INFO"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class QuadratureSettings:
    """Tolerances and budgets of the adaptive and tail integrators."""
    tol: float = 1e-10
    rtol: float = 1e-12
    max_evaluations: int = 1_000_000
    min_width: float = 1e-12
    max_cells: int = 10_000
    max_order: int = 10
    min_periods: int = 6


@dataclass
class ContinuationSettings:
    """Analytic-continuation scheme settings."""
    seam_kr: float = 1.0  # series/direct switchover radius, in units of 1/k
    remainder_order: int = 30
    seam_tolerance: float = 1e-9


@dataclass
class MinimalSubtractionSettings:
    """Minimal-subtraction scheme settings; grid_start is in units of 1/k."""
    tol: float = 1e-5
    grid_start: float = 0.4
    grid_ratio: float = 0.5
    grid_points: int = 4


@dataclass
class HarnessSettings:
    """Cross-scheme comparison settings."""
    tol: float = 1e-4
    workers: int = 4

    @property
    def clamped_workers(self) -> int:
        return max(1, min(self.workers, 8))


@dataclass
class AppConfig:
    """Application configuration."""
    logging: LoggingSettings = field(default_factory=LoggingSettings)
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    acont: ContinuationSettings = field(default_factory=ContinuationSettings)
    minsub: MinimalSubtractionSettings = field(default_factory=MinimalSubtractionSettings)
    harness: HarnessSettings = field(default_factory=HarnessSettings)

    _SECTIONS = {
        "logging": LoggingSettings,
        "quadrature": QuadratureSettings,
        "acont": ContinuationSettings,
        "minsub": MinimalSubtractionSettings,
        "harness": HarnessSettings,
    }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AppConfig":
        """Create config from a (possibly partial) nested dictionary."""
        data = data or {}
        if not isinstance(data, dict):
            raise ConfigError("Settings root must be a mapping")
        for key in data:
            if key not in cls._SECTIONS:
                logger.warning(f"Ignoring unknown settings section '{key}'")
        sections = {
            name: _section_from_dict(section_cls, data.get(name), name)
            for name, section_cls in cls._SECTIONS.items()
        }
        return cls(**sections)

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to a nested dictionary."""
        return {name: asdict(getattr(self, name)) for name in self._SECTIONS}

    @classmethod
    def from_yaml(cls, path: Path) -> "AppConfig":
        """Load config from YAML file; a missing file yields defaults."""
        path = Path(path)
        if not path.exists():
            logger.debug(f"No settings file at {path}, using defaults")
            return cls()
        try:
            with open(path) as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Cannot parse settings file {path}: {e}")
        return cls.from_dict(data)
