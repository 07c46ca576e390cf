"""
config.py

Run configuration for the command-line tools.

A run is described by one YAML document whose sections are all optional; an
empty or missing file reproduces the reference parameter set (lam=0.8, mu=1,
alpha=0.5, phi_max=1, 500 grid points, theta_max=12, degree 2, 60 quadrature
points, 20 restarts, seed 1, 10^5 Monte Carlo samples).

Classes
-------
ConfigError     : Invalid or unknown configuration entry.
SystemConfig    : Arrival and service rates.
WarmupConfig    : Warm-up model parameters.
ClassicalConfig : Certification grid settings.
QuantumConfig   : Quantum optimizer settings.
OracleConfig    : Monte Carlo oracle settings.
SimConfig       : Simulation size and seed.
OutputConfig    : Output directory and table format.
RunConfig       : All of the above plus the p-grids and worker threads.

Functions
---------
load_config     : Parse a YAML file into a RunConfig.
apply_overrides : Apply command-line overrides to a RunConfig.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import dataclasses
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from entangled_routing.model import SystemParams, make_params
from entangled_routing.strategies import (
    CertifiedBound,
    QuantumStrategy,
    certified_classical_bound,
    optimize_quantum,
)
from entangled_routing.throughput import WarmupModel

OUTPUT_FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending key path."""


def _default_p_grid() -> tuple[float, ...]:
    return tuple(round(0.025 * k, 3) for k in range(1, 20))


def _default_envelope_grid() -> tuple[float, ...]:
    return tuple(round(0.025 * k, 3) for k in range(0, 41))

# ---------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SystemConfig:
    lam: float = 0.8
    mu: float = 1.0

    def __post_init__(self) -> None:
        self.params()

    def params(self) -> SystemParams:
        return make_params(self.lam, self.mu)


@dataclass(frozen=True)
class WarmupConfig:
    phi_max: float = 1.0
    alpha: float = 0.5

    def __post_init__(self) -> None:
        self.model()

    def model(self) -> WarmupModel:
        return WarmupModel(phi_max=self.phi_max, alpha=self.alpha)


@dataclass(frozen=True)
class ClassicalConfig:
    grid_points: int = 500
    theta_max: float = 12.0
    epsilon: float = 1e-3
    lipschitz_factor: int = 10
    refine_tolerance: float = 1e-6
    max_refinements: int = 30
    audit_samples: int = 0

    def __post_init__(self) -> None:
        _check_at_least("grid_points", self.grid_points, 2)
        _check_positive("theta_max", self.theta_max)
        _check_positive("epsilon", self.epsilon)
        _check_at_least("lipschitz_factor", self.lipschitz_factor, 1)
        _check_positive("refine_tolerance", self.refine_tolerance)
        _check_at_least("max_refinements", self.max_refinements, 0)
        _check_at_least("audit_samples", self.audit_samples, 0)

    def certify(self, params: SystemParams, p: float) -> CertifiedBound:
        return certified_classical_bound(
            params,
            p,
            grid_points=self.grid_points,
            theta_max=self.theta_max,
            epsilon=self.epsilon,
            lipschitz_factor=self.lipschitz_factor,
            refine_tolerance=self.refine_tolerance,
            max_refinements=self.max_refinements,
            audit_samples=self.audit_samples,
        )


@dataclass(frozen=True)
class QuantumConfig:
    degree: int = 2
    quad_order: int = 60
    restarts: int = 20
    seed: int = 1
    tolerance: float = 1e-8
    maxiter: int = 500

    def __post_init__(self) -> None:
        _check_at_least("degree", self.degree, 0)
        _check_at_least("quad_order", self.quad_order, 2)
        _check_at_least("restarts", self.restarts, 1)
        _check_positive("tolerance", self.tolerance)
        _check_at_least("maxiter", self.maxiter, 1)

    def optimize(self, params: SystemParams, p: float, threads: int = 1) -> QuantumStrategy:
        return optimize_quantum(
            params,
            p,
            degree=self.degree,
            restarts=self.restarts,
            seed=self.seed,
            quad_order=self.quad_order,
            tolerance=self.tolerance,
            maxiter=self.maxiter,
            threads=threads,
        )


@dataclass(frozen=True)
class OracleConfig:
    n_samples: int = 100_000
    seed: int = 1

    def __post_init__(self) -> None:
        _check_at_least("n_samples", self.n_samples, 1000)


@dataclass(frozen=True)
class SimConfig:
    n_pairs: int = 500_000
    warmup_discard: int | None = None
    seed: int = 1
    n_batches: int = 32

    def __post_init__(self) -> None:
        _check_at_least("n_pairs", self.n_pairs, 1)
        if self.warmup_discard is not None:
            _check_at_least("warmup_discard", self.warmup_discard, 0)
        _check_at_least("n_batches", self.n_batches, 2)


@dataclass(frozen=True)
class OutputConfig:
    directory: Path = Path("results")
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.format not in OUTPUT_FORMATS:
            raise ValueError(
                f"format must be one of {', '.join(OUTPUT_FORMATS)}, got '{self.format}'"
            )


@dataclass(frozen=True)
class RunConfig:
    """
    Complete run configuration.

    Attributes
    ----------
    p_grid : tuple of float
        Splitting probabilities of the frontier, strictly increasing in (0, 1).
    envelope_grid : tuple of float
        Support grid of the concave envelope, strictly increasing in [0, 1].
    threads : int
        Worker threads for per-p work.
    """
    system: SystemConfig = field(default_factory=SystemConfig)
    warmup: WarmupConfig = field(default_factory=WarmupConfig)
    p_grid: tuple[float, ...] = field(default_factory=_default_p_grid)
    envelope_grid: tuple[float, ...] = field(default_factory=_default_envelope_grid)
    classical: ClassicalConfig = field(default_factory=ClassicalConfig)
    quantum: QuantumConfig = field(default_factory=QuantumConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    sim: SimConfig = field(default_factory=SimConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    threads: int = 1

    def __post_init__(self) -> None:
        if not self.p_grid:
            raise ConfigError("p_grid: must contain at least one probability")
        _check_grid("p_grid", self.p_grid, open_ends=True)
        if len(self.envelope_grid) < 2:
            raise ConfigError("envelope_grid: must contain at least two probabilities")
        _check_grid("envelope_grid", self.envelope_grid, open_ends=False)
        if self.threads < 1:
            raise ConfigError(f"threads: must be at least 1, got {self.threads}")

# ---------------------------------------------------------------------
# Validation Helpers
# ---------------------------------------------------------------------

def _check_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive, got {value}")


def _check_at_least(name: str, value: int, minimum: int) -> None:
    if value < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {value}")


def _check_grid(name: str, grid: tuple[float, ...], open_ends: bool) -> None:
    for p in grid:
        inside = 0.0 < p < 1.0 if open_ends else 0.0 <= p <= 1.0
        if not inside:
            bounds = "(0, 1)" if open_ends else "[0, 1]"
            raise ConfigError(f"{name}: probability {p} outside {bounds}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"{name}: must be strictly increasing")

# ---------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------

_SECTIONS: dict[str, type] = {
    "system": SystemConfig,
    "warmup": WarmupConfig,
    "classical": ClassicalConfig,
    "quantum": QuantumConfig,
    "oracle": OracleConfig,
    "sim": SimConfig,
    "output": OutputConfig,
}
_TOP_LEVEL = ("p_grid", "envelope_grid", "threads")


def _coerce(path: str, value: Any, annotation: Any) -> Any:
    """Check a scalar against a field annotation; ints are accepted for floats."""
    if annotation is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if annotation is int or annotation == (int | None):
        if value is None and annotation is not int:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if annotation is Path:
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a path, got {value!r}")
        return Path(value)
    if not isinstance(value, str):
        raise ConfigError(f"{path}: expected a string, got {value!r}")
    return value


def _build_section(name: str, cls: type, raw: Any) -> Any:
    if raw is None:
        return cls()
    if not isinstance(raw, Mapping):
        raise ConfigError(f"{name}: expected a mapping, got {type(raw).__name__}")

    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = [key for key in raw if key not in fields]
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}: unknown key")

    values = {key: _coerce(f"{name}.{key}", value, fields[key].type) for key, value in raw.items()}
    try:
        return cls(**values)
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def _build_grid(name: str, raw: Any) -> tuple[float, ...]:
    if not isinstance(raw, list):
        raise ConfigError(f"{name}: expected a list of probabilities")
    return tuple(_coerce(f"{name}[{i}]", value, float) for i, value in enumerate(raw))


def config_from_mapping(data: Mapping[str, Any]) -> RunConfig:
    """
    Build a RunConfig from a parsed YAML mapping.

    Raises
    ------
    ConfigError
        Raised for unknown keys, wrong types or invalid values.
    """
    unknown = [key for key in data if key not in _SECTIONS and key not in _TOP_LEVEL]
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown key")

    kwargs: dict[str, Any] = {
        name: _build_section(name, cls, data[name])
        for name, cls in _SECTIONS.items()
        if name in data
    }
    for grid in ("p_grid", "envelope_grid"):
        if grid in data:
            kwargs[grid] = _build_grid(grid, data[grid])
    if "threads" in data:
        kwargs["threads"] = _coerce("threads", data["threads"], int)

    return RunConfig(**kwargs)


def load_config(path: Path | None) -> RunConfig:
    """
    Load a run configuration from a YAML file.

    Parameters
    ----------
    path : Path or None
        YAML file; None gives the defaults.

    Raises
    ------
    ConfigError
        Raised if the file is missing, is not valid YAML, or holds invalid entries.

    Returns
    -------
    RunConfig
        Parsed configuration.
    """
    if path is None:
        return RunConfig()
    if not path.is_file():
        raise ConfigError(f"Configuration file not found: {path}")

    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"Invalid YAML in {path}: {exc}") from exc

    if data is None:
        return RunConfig()
    if not isinstance(data, Mapping):
        raise ConfigError(f"Configuration must be a mapping, got {type(data).__name__}")
    return config_from_mapping(data)


def apply_overrides(
    config: RunConfig,
    output: Path | None = None,
    fmt: str | None = None,
    seed: int | None = None,
    threads: int | None = None,
) -> RunConfig:
    """
    Apply global command-line flags; seed replaces the quantum, oracle and simulation seeds.

    Raises
    ------
    ConfigError
        Raised if an override is invalid.
    """
    try:
        if output is not None or fmt is not None:
            config = dataclasses.replace(
                config,
                output=OutputConfig(
                    directory=output if output is not None else config.output.directory,
                    format=fmt if fmt is not None else config.output.format,
                ),
            )
        if seed is not None:
            config = dataclasses.replace(
                config,
                quantum=dataclasses.replace(config.quantum, seed=seed),
                oracle=dataclasses.replace(config.oracle, seed=seed),
                sim=dataclasses.replace(config.sim, seed=seed),
            )
        if threads is not None:
            config = dataclasses.replace(config, threads=threads)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return config
