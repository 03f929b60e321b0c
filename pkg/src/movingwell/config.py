"""Flat key = value run configuration: parse, validate, reject unknowns.

SI configs are converted to the natural-unit twin (hbar = m = 1, lengths in
units of w0) before anything numerical runs; the returned scales convert the
outputs back.  Every unknown key is an error with its line number -- configs
are contracts, not suggestions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .core import (ELECTRON_MASS_SI, NATURAL, SI, Linear, Monomial,
                   PhysicalParams, Sinusoidal, Tabulated, UnitScales,
                   WallTrajectory)
from .errors import ConfigError
from .solver import SolverConfig

_SCHEMA: dict[str, type] = {
    "units": str,
    "mass": float,
    "trajectory": str,
    "w0": float,
    "v1": float,
    "v2": float,
    "T": float,
    "n": float,
    "amplitude": float,
    "omega": float,
    "table": str,
    "packet_center": float,
    "packet_width": float,
    "packet_momentum": float,
    "n_points": int,
    "steps_per_tau": int,
    "t_max": float,
    "n_t": int,
    "out": str,
}

_TRAJECTORY_KEYS = {
    "linear": {"w0", "v1", "v2"},
    "monomial": {"w0", "T", "n"},
    "sinusoidal": {"w0", "amplitude", "omega"},
    "tabulated": {"table"},
}


@dataclass
class RunConfig:
    """Raw, validated key/value content of a run configuration."""

    units: str = NATURAL
    mass: float | None = None
    trajectory: str = "linear"
    w0: float = 1.0
    v1: float = 0.0
    v2: float = 0.0
    T: float = 1.0
    n: float = 1.0
    amplitude: float = 0.0
    omega: float = 1.0
    table: str | None = None
    packet_center: float = 0.3
    packet_width: float = 0.05
    packet_momentum: float = 0.0
    n_points: int = 1024
    steps_per_tau: int = 4096
    t_max: float = 1.0
    n_t: int = 128
    out: str = "carpet"
    source: str = "<defaults>"


def _convert(key: str, raw: str, where: str):
    target = _SCHEMA[key]
    try:
        if target is int:
            value = int(raw)
        elif target is float:
            value = float(raw)
        else:
            value = raw
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse {key!r} value {raw!r}") from exc
    return value


def parse_config(path: str | Path) -> RunConfig:
    """Read a flat `key = value` file; '#' starts a comment."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = RunConfig(source=str(path))
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if not raw:
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        setattr(cfg, key, _convert(key, raw, f"{path}:{lineno}"))
    return cfg


def apply_overrides(cfg: RunConfig, overrides: list[str]) -> RunConfig:
    """CLI `--set key=value` pairs; they win over file values."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, raw = item.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"override: unknown key {key!r}")
        cfg = replace(cfg, **{key: _convert(key, raw, "override")})
    return cfg


def validate(cfg: RunConfig) -> None:
    if cfg.units not in (NATURAL, SI):
        raise ConfigError(f"units must be 'natural' or 'si', got {cfg.units!r}")
    if cfg.trajectory not in _TRAJECTORY_KEYS:
        raise ConfigError(f"unknown trajectory {cfg.trajectory!r}")
    for key in ("w0", "packet_width", "t_max", "T"):
        if getattr(cfg, key) <= 0:
            raise ConfigError(f"{key} must be positive")
    if cfg.mass is not None and cfg.mass <= 0:
        raise ConfigError("mass must be positive")
    if cfg.n_points < 64:
        raise ConfigError("n_points must be >= 64")
    if cfg.steps_per_tau < 1:
        raise ConfigError("steps_per_tau must be >= 1")
    if cfg.n_t < 2:
        raise ConfigError("n_t must be >= 2")
    if cfg.trajectory == "tabulated" and not cfg.table:
        raise ConfigError("tabulated trajectory needs a 'table' file")


@dataclass
class RunBundle:
    """Everything a subcommand needs, already in natural units."""

    params: PhysicalParams
    traj: WallTrajectory
    packet_center: float
    packet_width: float
    packet_momentum: float
    solver: SolverConfig
    t_max: float
    n_t: int
    out: str
    units: str
    scales: UnitScales | None = None
    config: RunConfig = field(default_factory=RunConfig)

    def to_si_time(self, t: float) -> float:
        return t * self.scales.time if self.scales else t

    def to_si_length(self, x):
        return x * self.scales.length if self.scales else x


def _load_table(path: str, scales: UnitScales | None):
    try:
        data = np.loadtxt(path, delimiter=",", comments="#")
    except OSError as exc:
        raise ConfigError(f"cannot read table {path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 3:
        raise ConfigError("trajectory table must have columns t, w1, w2")
    t, w1, w2 = data[:, 0], data[:, 1], data[:, 2]
    if scales is not None:
        t = scales.to_natural_time(t)
        w1 = scales.to_natural_length(w1)
        w2 = scales.to_natural_length(w2)
    return Tabulated(t, w1, w2)


def build_bundle(cfg: RunConfig) -> RunBundle:
    """Validate and convert a RunConfig into natural-unit objects."""
    validate(cfg)
    if cfg.units == SI:
        scales = UnitScales(length=cfg.w0,
                            mass=cfg.mass if cfg.mass is not None
                            else ELECTRON_MASS_SI)
        params = PhysicalParams.natural()
        vel = scales.velocity
        if cfg.trajectory == "linear":
            traj: WallTrajectory = Linear(1.0, cfg.v1 / vel, cfg.v2 / vel)
        elif cfg.trajectory == "monomial":
            traj = Monomial(1.0, cfg.T / scales.time, cfg.n)
        elif cfg.trajectory == "sinusoidal":
            traj = Sinusoidal(1.0, cfg.amplitude / scales.length,
                              cfg.omega * scales.time)
        else:
            traj = _load_table(cfg.table, scales)
        center = cfg.packet_center / scales.length
        width = cfg.packet_width / scales.length
        momentum = cfg.packet_momentum * scales.length / scales.hbar
        t_max = cfg.t_max / scales.time
    else:
        scales = None
        params = PhysicalParams(1.0, cfg.mass if cfg.mass is not None else 1.0,
                                NATURAL)
        if cfg.trajectory == "linear":
            traj = Linear(cfg.w0, cfg.v1, cfg.v2)
        elif cfg.trajectory == "monomial":
            traj = Monomial(cfg.w0, cfg.T, cfg.n)
        elif cfg.trajectory == "sinusoidal":
            traj = Sinusoidal(cfg.w0, cfg.amplitude, cfg.omega)
        else:
            traj = _load_table(cfg.table, None)
        center, width, momentum = (cfg.packet_center, cfg.packet_width,
                                   cfg.packet_momentum)
        t_max = cfg.t_max
    solver = SolverConfig(n_points=cfg.n_points,
                          steps_per_unit_tau=cfg.steps_per_tau)
    return RunBundle(params=params, traj=traj, packet_center=center,
                     packet_width=width, packet_momentum=momentum,
                     solver=solver, t_max=t_max, n_t=cfg.n_t, out=cfg.out,
                     units=cfg.units, scales=scales, config=cfg)
