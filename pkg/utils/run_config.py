"""
Run-config client: flat ``key = value`` files with dotted sections.

    command = solve
    dimension = 5
    nonlinearity = power_mass
    nonlinearity.p = 4
    grid.R = 20
    solver.epsilon_schedule = geometric:0.5:20

Files are parsed with ``dotenv_values`` (``#`` comments, optional quotes) and
validated against every downstream precondition before anything runs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from dotenv import dotenv_values

from configs import env_config
from configs.constants import (
    DEFAULT_NODES,
    DEFAULT_ORDER,
    DEFAULT_PDE_TOLERANCE,
    DEFAULT_POHOZAEV_TOLERANCE,
    DEFAULT_RADIUS,
    MIN_DIMENSION,
)
from helpers.ground_solver import SolverConfig, geometric_schedule
from helpers.nonlinearity import Nonlinearity, NonlinearityError, make_nonlinearity
from helpers.radial_grid import GridError, RadialGrid, build_grid
from helpers.shared import _normalize_bool_flag, _normalize_lower, _to_float_list

__all__ = [
    "ConfigError",
    "COMMANDS",
    "NonlinearitySpec",
    "GridSpec",
    "SweepItem",
    "RunConfig",
    "load_run_config",
    "parse_run_config",
    "parse_schedule",
    "parse_sweep_item",
]

COMMANDS = ("solve", "verify", "logsob", "sweep")
FORMATS = ("json", "csv")

KNOWN_KEYS = (
    "command",
    "dimension",
    "nonlinearity",
    "nonlinearity.p",
    "nonlinearity.mu",
    "grid.R",
    "grid.n",
    "grid.order",
    "solver.max_iterations",
    "solver.tolerance",
    "solver.residual_tolerance",
    "solver.stall_tolerance",
    "solver.epsilon_schedule",
    "solver.backtracking",
    "solver.armijo",
    "solver.amplitudes",
    "solver.max_step",
    "solver.min_step",
    "solver.shift",
    "solver.polish",
    "solver.preconditioner",
    "check.pohozaev_tolerance",
    "check.pde_tolerance",
    "output.dir",
    "output.format",
    "seed",
    "sweep.items",
    "verify.profile",
)
_CANONICAL = {key.lower(): key for key in KNOWN_KEYS}

_SOLVER_FLOATS = {
    "solver.tolerance": "tolerance",
    "solver.residual_tolerance": "residual_tolerance",
    "solver.stall_tolerance": "stall_tolerance",
    "solver.backtracking": "backtracking",
    "solver.armijo": "armijo",
    "solver.max_step": "max_step",
    "solver.min_step": "min_step",
    "solver.shift": "shift",
}


class ConfigError(ValueError):
    """Raised for unreadable, unknown or invalid run-config entries."""


@dataclass(frozen=True)
class NonlinearitySpec:
    name: str = "power_mass"
    p: Optional[float] = None
    mu: Optional[float] = None

    def build(self, dimension: int) -> Nonlinearity:
        return make_nonlinearity(self.name, dimension, p=self.p, mu=self.mu)

    @property
    def is_log(self) -> bool:
        return self.name in {"log", "logarithmic"}


@dataclass(frozen=True)
class GridSpec:
    R: float = DEFAULT_RADIUS
    n: int = DEFAULT_NODES
    order: int = DEFAULT_ORDER

    def build(self, dimension: int) -> RadialGrid:
        return build_grid(dimension, self.R, self.n, self.order)


@dataclass(frozen=True)
class SweepItem:
    dimension: int
    model: NonlinearitySpec
    text: str


@dataclass(frozen=True)
class RunConfig:
    command: str
    dimension: Optional[int]
    nonlinearity: NonlinearitySpec
    grid: GridSpec
    solver: SolverConfig
    pohozaev_tolerance: float = DEFAULT_POHOZAEV_TOLERANCE
    pde_tolerance: float = DEFAULT_PDE_TOLERANCE
    output_dir: Path = Path(env_config.OUTPUT_DIR)
    output_format: str = "json"
    seed: int = env_config.DEFAULT_SEED
    sweep_items: Tuple[str, ...] = field(default_factory=tuple)
    verify_profile: Optional[Path] = None
    source: Optional[Path] = None

    def build_grid(self) -> RadialGrid:
        return self.grid.build(self.dimension)

    def build_nonlinearity(self) -> Nonlinearity:
        return self.nonlinearity.build(self.dimension)

    def with_overrides(self, **changes: Any) -> "RunConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "N": self.dimension,
            "nonlinearity": {"name": self.nonlinearity.name, "p": self.nonlinearity.p, "mu": self.nonlinearity.mu},
            "grid": {"R": self.grid.R, "n": self.grid.n, "order": self.grid.order},
            "solver": self.solver.to_dict(),
            "check": {"pohozaev_tolerance": self.pohozaev_tolerance, "pde_tolerance": self.pde_tolerance},
            "seed": self.seed,
        }


def _number(raw: Dict[str, str], key: str, kind=float, default=None):
    if key not in raw:
        return default
    text = raw[key]
    try:
        value = kind(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected {kind.__name__}, got {text!r}") from None
    return value


def _integer(raw: Dict[str, str], key: str, default=None) -> Optional[int]:
    value = _number(raw, key, float, None)
    if value is None:
        return default
    if value != int(value):
        raise ConfigError(f"{key}: expected an integer, got {raw[key]!r}")
    return int(value)


def parse_schedule(text: str) -> Tuple[float, ...]:
    """Comma list of reals or ``geometric:<first>:<count>``."""
    spec = str(text).strip().lower()
    if spec.startswith("geometric"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"solver.epsilon_schedule: expected geometric:<first>:<count>, got {text!r}")
        try:
            first, count = float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"solver.epsilon_schedule: bad geometric spec {text!r}") from None
        if count < 1:
            raise ConfigError(f"solver.epsilon_schedule: count must be >= 1, got {count}")
        return geometric_schedule(first, count)
    try:
        return tuple(_to_float_list(spec))
    except ValueError:
        raise ConfigError(f"solver.epsilon_schedule: not a list of reals: {text!r}") from None


def parse_sweep_item(text: str) -> SweepItem:
    """``N:model[:p[:mu]]`` -> SweepItem; raises ConfigError on malformed items."""
    parts = [part.strip() for part in str(text).split(":")]
    if len(parts) < 2 or len(parts) > 4:
        raise ConfigError(f"sweep item {text!r}: expected N:model[:p[:mu]]")
    try:
        dimension = int(parts[0])
        p = float(parts[2]) if len(parts) > 2 and parts[2] else None
        mu = float(parts[3]) if len(parts) > 3 and parts[3] else None
    except ValueError:
        raise ConfigError(f"sweep item {text!r}: non-numeric field") from None
    if dimension < MIN_DIMENSION:
        raise ConfigError(f"sweep item {text!r}: N must be >= {MIN_DIMENSION} (2** undefined for N = 4)")
    model = NonlinearitySpec(_normalize_lower(parts[1]) or "", p, mu)
    try:
        model.build(dimension)
    except NonlinearityError as exc:
        raise ConfigError(f"sweep item {text!r}: {exc}") from None
    return SweepItem(dimension=dimension, model=model, text=str(text).strip())


def _canonical_keys(values: Mapping[str, Optional[str]], origin: str) -> Dict[str, str]:
    raw: Dict[str, str] = {}
    unknown = []
    for key, value in values.items():
        canonical = _CANONICAL.get(key.strip().lower())
        if canonical is None:
            unknown.append(key)
            continue
        if value is None:
            raise ConfigError(f"{origin}: key {key!r} has no value")
        raw[canonical] = str(value).strip()
    if unknown:
        raise ConfigError(f"{origin}: unknown key(s) {', '.join(sorted(unknown))}")
    return raw


def _solver_config(raw: Dict[str, str]) -> SolverConfig:
    kwargs: Dict[str, Any] = {}
    for key, attr in _SOLVER_FLOATS.items():
        value = _number(raw, key)
        if value is not None:
            kwargs[attr] = value
    iterations = _integer(raw, "solver.max_iterations")
    if iterations is not None:
        kwargs["max_iterations"] = iterations
    if "solver.epsilon_schedule" in raw:
        kwargs["epsilon_schedule"] = parse_schedule(raw["solver.epsilon_schedule"])
    if "solver.amplitudes" in raw:
        try:
            kwargs["amplitudes"] = tuple(_to_float_list(raw["solver.amplitudes"]))
        except ValueError:
            raise ConfigError(f"solver.amplitudes: not a list of reals: {raw['solver.amplitudes']!r}") from None
    if "solver.polish" in raw:
        try:
            kwargs["polish"] = _normalize_bool_flag(raw["solver.polish"])
        except ValueError as exc:
            raise ConfigError(f"solver.polish: {exc}") from None
    if "solver.preconditioner" in raw:
        kwargs["preconditioner"] = _normalize_lower(raw["solver.preconditioner"])
    try:
        return SolverConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}") from None


def parse_run_config(values: Mapping[str, Optional[str]], origin: str = "<config>", overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    raw = _canonical_keys(values, origin)
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[_CANONICAL[key.lower()]] = str(value)

    command = _normalize_lower(raw.get("command"))
    if command not in COMMANDS:
        raise ConfigError(f"{origin}: command must be one of {COMMANDS}, got {raw.get('command')!r}")

    dimension = _integer(raw, "dimension")
    if dimension is None and command != "sweep":
        raise ConfigError(f"{origin}: 'dimension' is required for {command}")
    if dimension is not None and dimension < MIN_DIMENSION:
        raise ConfigError(f"{origin}: dimension N={dimension} is not supported; 2** = 2N/(N-4) needs N >= {MIN_DIMENSION}")

    default_model = "log" if command == "logsob" else "power_mass"
    nonlinearity = NonlinearitySpec(
        name=_normalize_lower(raw.get("nonlinearity")) or default_model,
        p=_number(raw, "nonlinearity.p"),
        mu=_number(raw, "nonlinearity.mu"),
    )
    if command == "logsob" and not nonlinearity.is_log:
        raise ConfigError(f"{origin}: logsob runs the log model, got nonlinearity = {nonlinearity.name}")

    grid = GridSpec(
        R=_number(raw, "grid.R", float, DEFAULT_RADIUS),
        n=_integer(raw, "grid.n", DEFAULT_NODES),
        order=_integer(raw, "grid.order", DEFAULT_ORDER),
    )
    check_dimension = dimension if dimension is not None else MIN_DIMENSION
    try:
        grid.build(check_dimension)
        if dimension is not None:
            nonlinearity.build(dimension)
    except (GridError, NonlinearityError) as exc:
        raise ConfigError(f"{origin}: {exc}") from None

    pohozaev_tolerance = _number(raw, "check.pohozaev_tolerance", float, DEFAULT_POHOZAEV_TOLERANCE)
    pde_tolerance = _number(raw, "check.pde_tolerance", float, DEFAULT_PDE_TOLERANCE)
    if pohozaev_tolerance <= 0 or pde_tolerance <= 0:
        raise ConfigError(f"{origin}: check tolerances must be positive")

    output_format = _normalize_lower(raw.get("output.format")) or "json"
    if output_format not in FORMATS:
        raise ConfigError(f"{origin}: output.format must be one of {FORMATS}, got {output_format!r}")

    sweep_items = tuple(item.strip() for item in raw.get("sweep.items", "").split(",") if item.strip())
    if command == "sweep" and not sweep_items:
        raise ConfigError(f"{origin}: sweep needs a non-empty sweep.items list")

    profile = raw.get("verify.profile")
    return RunConfig(
        command=command,
        dimension=dimension,
        nonlinearity=nonlinearity,
        grid=grid,
        solver=_solver_config(raw),
        pohozaev_tolerance=pohozaev_tolerance,
        pde_tolerance=pde_tolerance,
        output_dir=Path(raw.get("output.dir") or env_config.OUTPUT_DIR),
        output_format=output_format,
        seed=_integer(raw, "seed", env_config.DEFAULT_SEED),
        sweep_items=sweep_items,
        verify_profile=Path(profile) if profile else None,
    )


def load_run_config(path, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Read and validate a run-config file; CLI overrides use config key names."""
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    try:
        values = dotenv_values(config_path, interpolate=False, encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config file {config_path}: {exc}") from None
    cfg = parse_run_config(values, origin=os.fspath(config_path), overrides=overrides)
    return replace(cfg, source=config_path)
