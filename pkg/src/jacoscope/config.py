"""Run configuration: defaults, ``key = value`` config files and overrides.

Precedence is command-line flags over a config file over the defaults below.
A config file holds one ``key = value`` per line; ``#`` starts a comment,
blank lines and ``[section]`` headers are ignored, strings may be quoted and
lists are written ``[a, b, c]``.
"""

from __future__ import annotations

import ast
import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # integration and dynamics
    integrator_tol: float = 1e-10
    probe_tol: float = 1e-8
    probe_radii: tuple[float, ...] = (1e-1, 1e-2, 1e-3)
    probe_angles: int = 8
    probe_max_steps: int = 100_000
    # properness
    properness_radii: int = 20
    properness_samples: int = 4096
    growth_threshold: float = 1e6
    growth_ratio: float = 1.2
    plateau_tol: float = 1e-6
    growth_window: int = 5
    # cima
    max_weight: int = 6
    cima_starts: int = 64
    cima_threshold: float = 1e-8
    # jacobian validation
    jacobian_box: float = 10.0
    jacobian_grid: int = 201
    jacobian_box_budget: int = 4096
    # oracle
    oracle_box: float = 3.0
    oracle_resolution: int = 201
    oracle_bucket: float = 0.0  # 0 selects a quarter of the grid spacing
    oracle_min_separation: float = 1e-4
    oracle_max_residual: float = 1e-10
    oracle_max_points: int = 4_000_000
    oracle_max_candidates: int = 64
    # orchestration
    seed: int = 0
    run_monodromy: bool = False
    run_oracle: bool = False
    short_circuit: bool = False
    output: str = ""
    csv_dir: str = "portrait"
    svg: bool = False

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if (f.name.endswith("_tol") or f.name.endswith("_threshold") or f.name.endswith("_ratio")
                    or f.name in ("jacobian_box", "oracle_box", "oracle_min_separation",
                                  "oracle_max_residual")) and not v > 0:
                raise ConfigError(f"{f.name} must be positive, got {v!r}")
        if self.growth_ratio <= 1:
            raise ConfigError("growth_ratio must exceed 1")
        for name in ("properness_radii", "properness_samples", "growth_window", "max_weight",
                     "cima_starts", "probe_angles", "probe_max_steps", "jacobian_grid",
                     "jacobian_box_budget", "oracle_max_points", "oracle_max_candidates"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        if self.oracle_resolution < 2:
            raise ConfigError("oracle_resolution must be at least 2")
        if not self.probe_radii or min(self.probe_radii) <= 0:
            raise ConfigError("probe_radii must be positive")
        if self.oracle_bucket < 0:
            raise ConfigError("oracle_bucket must be non-negative")

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **{k: _coerce(k, v) for k, v in changes.items()})

    def to_dict(self) -> dict[str, Any]:
        out = dataclasses.asdict(self)
        out["probe_radii"] = list(self.probe_radii)
        return out


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _coerce(key: str, value: Any) -> Any:
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    default = _FIELDS[key].default
    try:
        if isinstance(default, bool):
            if isinstance(value, str):
                low = value.strip().lower()
                if low not in ("true", "false", "1", "0", "yes", "no"):
                    raise ConfigError(f"{key}: expected a boolean, got {value!r}")
                return low in ("true", "1", "yes")
            return bool(value)
        if isinstance(default, int):
            if isinstance(value, float) and not value.is_integer():
                raise ConfigError(f"{key}: expected an integer, got {value!r}")
            return int(value)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, tuple):
            if isinstance(value, str):
                value = [v for v in value.replace(",", " ").split() if v]
            return tuple(float(v) for v in value)
        return str(value)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{key}: cannot interpret {value!r}") from exc


def parse_config_text(text: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]") and "=" not in line):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        try:
            parsed = ast.literal_eval(value)
        except (ValueError, SyntaxError):
            parsed = value
        values[key] = _coerce(key, parsed)
    return values


def load_config(path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Defaults, then the file at ``path`` (if any), then ``overrides`` (``None`` values skipped)."""
    values: dict[str, Any] = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text(encoding="utf-8")))
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = _coerce(k, v)
    return RunConfig(**values)


DEFAULT = RunConfig()

__all__ = ["ConfigError", "DEFAULT", "RunConfig", "load_config", "parse_config_text"]
