"""Crank-Nicolson evolution in the comoving frame and quantum carpets.

Evolution always happens on the fixed box [0, 1] in rescaled time tau, under
the induced fictitious potential f(tau) y + k(tau) y^2 / 2; lab-frame runs
are transform -> evolve -> inverse-transform.  Fixed Dirichlet walls make CN
unconditionally stable and unitary, and uniform-tau stepping equalises the
phase advance per step (lab evolution slows down as the well widens).

The lab time is co-integrated alongside the field through dt/dtau = w(t)^2
(classical RK4), so no tau-map inversions are needed inside the time loop;
snapshot times re-anchor the integration when the caller knows them exactly.

Tridiagonal CN systems are solved by LAPACK's gtsv via scipy (Gaussian
elimination with partial pivoting, i.e. the Thomas algorithm with a pivot
fallback) at machine precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .core import (COMOVING, LAB, ComplexField, Linear, PhysicalParams,
                   SpatialGrid, WallTrajectory, l2_norm, resample)
from .errors import DegeneratePacket, FrameMismatch, GridMismatch
from .transforms import TauMap, comoving_forward, comoving_inverse


@dataclass(frozen=True)
class SolverConfig:
    """Spatial resolution and tau-step density of the CN integrator."""

    n_points: int = 1024
    steps_per_unit_tau: int = 4096

    def __post_init__(self):
        if self.n_points < 64:
            raise ValueError("n_points must be >= 64")
        if self.steps_per_unit_tau < 1:
            raise ValueError("steps_per_unit_tau must be >= 1")
        dtau = 1.0 / self.steps_per_unit_tau
        h = 1.0 / (self.n_points - 1)
        if dtau > h:
            warnings.warn(f"dtau={dtau:.3g} exceeds grid spacing h={h:.3g}; "
                          "phase resolution will be poor", stacklevel=2)


def gaussian_packet(center: float, width: float, momentum: float,
                    grid: SpatialGrid, params: PhysicalParams | None = None,
                    frame: str = LAB) -> ComplexField:
    """Normalized Gaussian exp(-(x-c)^2 / 2 width^2) e^{i p x / hbar},
    clipped to zero at the grid ends (the walls) and renormalized.

    ``width`` is the standard deviation of the amplitude envelope (the
    density has spread width/sqrt 2).  Raises DegeneratePacket when clipping
    at the walls removes a noticeable part of the norm (ratio below 0.95),
    i.e. the packet sits too close to a wall for its revival copies to stay
    recognisable.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    if not grid.lo < center < grid.hi:
        raise ValueError("center must lie inside the grid")
    if params is None:
        params = PhysicalParams.natural()
    x = grid.points
    envelope = np.exp(-((x - center) ** 2) / (2.0 * width**2))
    values = envelope * np.exp(1j * momentum * x / params.hbar)
    values[0] = 0.0
    values[-1] = 0.0
    f = ComplexField(grid, values, frame)
    clipped = l2_norm(f)
    unclipped = (math.pi * width**2) ** 0.25  # L2 norm over the real line
    if clipped < 0.95 * unclipped:
        raise DegeneratePacket(
            f"packet at {center} (width {width}) loses {1 - clipped/unclipped:.1%} "
            "of its norm at the walls")
    return f.with_values(values / clipped)


@dataclass
class EvolutionResult:
    """Comoving snapshots, their rescaled times, and the matching lab times."""

    taus: np.ndarray
    times: np.ndarray
    fields: list[ComplexField] = field(default_factory=list)


def _advance_time_rk4(traj: WallTrajectory, t: float, dtau: float) -> float:
    """One RK4 step of dt/dtau = w(t)^2."""
    def g(s):
        return float(traj.width(s)) ** 2
    k1 = g(t)
    k2 = g(t + 0.5 * dtau * k1)
    k3 = g(t + 0.5 * dtau * k2)
    k4 = g(t + dtau * k3)
    return t + dtau * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def evolve_comoving(phi0: ComplexField, traj: WallTrajectory, taus,
                    config: SolverConfig, params: PhysicalParams,
                    t0: float = 0.0, times=None) -> EvolutionResult:
    """CN evolution of i hbar phi_tau = -(hbar^2/2m) phi_yy + (f y + k y^2/2) phi.

    ``taus`` is either a final rescaled time (evolved from 0) or an increasing
    array whose first entry is the tau of ``phi0``; snapshots are returned at
    every entry.  ``t0`` is the lab time of ``phi0`` and ``times``, when
    given, pins the lab time at each snapshot exactly.

    The potential is evaluated at the midpoint of each step, keeping the
    scheme second order for time-dependent walls; with the same operator on
    both CN sides each step is exactly unitary up to the linear-solve error.
    """
    if phi0.frame != COMOVING:
        raise FrameMismatch("evolve_comoving expects a comoving field")
    if abs(phi0.grid.lo) > 1e-9 or abs(phi0.grid.hi - 1.0) > 1e-9:
        raise GridMismatch("comoving field must live on [0, 1]")
    peak = float(np.max(np.abs(phi0.values))) or 1.0
    if abs(phi0.values[0]) > 1e-7 * peak or abs(phi0.values[-1]) > 1e-7 * peak:
        raise ValueError("phi0 must vanish at the box walls")

    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if taus.size == 1:
        taus = np.array([0.0, float(taus[0])])
    if np.any(np.diff(taus) <= 0):
        raise ValueError("taus must be strictly increasing")
    if times is not None:
        times = np.asarray(times, dtype=float)
        if times.shape != taus.shape:
            raise ValueError("times must match taus")

    m, hbar = params.mass, params.hbar
    y_in = phi0.grid.points[1:-1]
    h = phi0.grid.h
    kin = hbar**2 / (2.0 * m * h**2)
    off = -kin * np.ones(len(y_in) - 1, dtype=complex)

    traj.state(t0)  # validate the starting point
    # Linear walls induce no fictitious potential: comoving evolution is free,
    # so the time co-integration can use the closed-form tau map instead.
    free = isinstance(traj, Linear)
    tmap = TauMap(traj, params) if free else None

    v = phi0.values[1:-1].astype(complex)
    t = float(t0)
    result = EvolutionResult(taus=taus.copy(), times=np.empty_like(taus))
    result.times[0] = t
    result.fields.append(phi0.with_values(phi0.values.copy()))

    ab = np.zeros((3, len(y_in)), dtype=complex)  # banded storage for gtsv

    for i in range(len(taus) - 1):
        span = taus[i + 1] - taus[i]
        n_steps = max(1, math.ceil(span * config.steps_per_unit_tau))
        dtau = span / n_steps
        lam = 1j * dtau / (2.0 * hbar)
        for _ in range(n_steps):
            if free:
                pot = 0.0
            else:
                t_mid = _advance_time_rk4(traj, t, 0.5 * dtau)
                s = traj.state(t_mid)
                w3 = s.w**3
                pot = m * w3 * (s.ddw1 * y_in + 0.5 * s.ddw * y_in**2)
                t = _advance_time_rk4(traj, t_mid, 0.5 * dtau)
            diag = 2.0 * kin + pot
            # rhs = (I - lam H) v
            rhs = (1.0 - lam * diag) * v
            rhs[:-1] -= lam * off * v[1:]
            rhs[1:] -= lam * off * v[:-1]
            ab[0, 1:] = lam * off
            ab[1, :] = 1.0 + lam * diag
            ab[2, :-1] = lam * off
            v = solve_banded((1, 1), ab, rhs)
        if times is not None:
            t = float(times[i + 1])
        elif free:
            t = tmap.t_of_tau(taus[i + 1])
        result.times[i + 1] = t
        full = np.zeros(phi0.grid.n_points, dtype=complex)
        full[1:-1] = v
        result.fields.append(phi0.with_values(full))
    return result


@dataclass
class LabEvolution:
    """Lab-frame snapshots (each on its own instantaneous-well grid)."""

    ts: np.ndarray
    taus: np.ndarray
    fields: list[ComplexField]
    comoving: EvolutionResult


def evolve_lab(psi0: ComplexField, traj: WallTrajectory, ts,
               config: SolverConfig, params: PhysicalParams) -> LabEvolution:
    """Transform to the comoving box, evolve in tau, map back at each t."""
    ts = np.asarray(ts, dtype=float)
    if ts.ndim != 1 or len(ts) < 2 or np.any(np.diff(ts) <= 0):
        raise ValueError("ts must be an increasing array of at least 2 times")
    tmap = TauMap(traj, params)
    taus = np.array([tmap.tau_of_t(float(t)) for t in ts])
    phi0 = comoving_forward(psi0, traj, float(ts[0]), params)
    ev = evolve_comoving(phi0, traj, taus, config, params,
                         t0=float(ts[0]), times=ts)
    fields = [comoving_inverse(f, traj, float(t), params)
              for f, t in zip(ev.fields, ts)]
    return LabEvolution(ts=ts, taus=taus, fields=fields, comoving=ev)


@dataclass
class CarpetRecord:
    """|psi|^2 on a fixed (x, t) rectangle plus everything needed to redo it."""

    grid: SpatialGrid
    ts: np.ndarray
    densities: np.ndarray  # shape (n_t, n_x), time-major
    frame: str
    norms: np.ndarray
    metadata: dict
    values: np.ndarray | None = None  # complex amplitudes behind the densities


def carpet(psi0: ComplexField, traj: WallTrajectory, t_max: float, n_t: int,
           config: SolverConfig, params: PhysicalParams,
           metadata: dict | None = None) -> CarpetRecord:
    """Quantum carpet: evolve and record densities on a fixed lab grid that
    covers the walls over the whole window; points outside the instantaneous
    well are exactly zero."""
    if n_t < 2:
        raise ValueError("n_t must be >= 2")
    ts = np.linspace(0.0, t_max, n_t)
    ev = evolve_lab(psi0, traj, ts, config, params)
    walls = [traj.state(float(t)) for t in ts]
    lo = min(s.w1 for s in walls)
    hi = max(s.w2 for s in walls)
    grid = SpatialGrid(lo, hi, config.n_points)
    values = np.empty((n_t, config.n_points), dtype=complex)
    norms = np.empty(n_t)
    for i, f in enumerate(ev.fields):
        on_grid = resample(f, grid)
        values[i] = on_grid.values
        norms[i] = l2_norm(on_grid) ** 2
    meta = dict(metadata or {})
    meta.setdefault("trajectory", repr(traj))
    meta.setdefault("params", repr(params))
    meta.setdefault("n_points", config.n_points)
    meta.setdefault("steps_per_unit_tau", config.steps_per_unit_tau)
    return CarpetRecord(grid=grid, ts=ts, densities=np.abs(values) ** 2,
                        frame=LAB, norms=norms, metadata=meta, values=values)
