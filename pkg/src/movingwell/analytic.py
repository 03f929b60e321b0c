"""Closed-form eigenmodes and phases of static and moving-wall wells.

For walls moving at constant velocities w1 = v1 t, w2 = w0 + v2 t the exact
solutions are

    psi_n(x, t) = sqrt(2/w) sin(n pi (x - w1)/w)
                  * exp(i theta(x, t) - i E_n^0 w0 t / (hbar w))

with the mode-independent gauge phase

    theta(x, t) = m (dv x^2 + 2 v1 w0 x - v1^2 w0 t) / (2 hbar w)

and E_n^0 = (n hbar pi)^2 / (2 m w0^2).  The dynamic factor equals
exp(-i int_0^t E_n(t') dt' / hbar) with the instantaneous energies
E_n(t) = (n hbar pi)^2 / (2 m w(t)^2), which is how the slowly-accelerating
generalisation is built.

The module also carries the verification machinery: a finite-difference
Schrodinger residual and a numerical Berry-connection quadrature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Linear, PhysicalParams, SpatialGrid, WallTrajectory
from .errors import OutOfDomain, ParallelWalls, SlowAccelWarning
from .quadrature import adaptive_simpson, composite_simpson
from . import transforms


def _check_mode(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"mode number must be a positive integer, got {n!r}")


def _sin_clamped(n: int, rel: np.ndarray, w: float) -> np.ndarray:
    """sin(n pi rel / w) with exact zeros where rel is exactly 0 or w."""
    out = np.sin(n * np.pi * rel / w)
    out = np.where((rel == 0.0) | (rel == w), 0.0, out)
    return out


# ---------------------------------------------------------------------------
# static well
# ---------------------------------------------------------------------------

def static_eigenmode(n: int, w: float, x) -> np.ndarray:
    """sqrt(2/w) sin(n pi x / w) on [0, w]."""
    _check_mode(n)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > w):
        raise OutOfDomain("x outside [0, w]")
    return math.sqrt(2.0 / w) * _sin_clamped(n, x, w)


def static_energy(n: int, w: float, params: PhysicalParams) -> float:
    """E_n = (hbar n pi)^2 / (2 m w^2)."""
    _check_mode(n)
    return (params.hbar * n * math.pi) ** 2 / (2.0 * params.mass * w**2)


# ---------------------------------------------------------------------------
# gauge phase theta for constant-velocity walls
# ---------------------------------------------------------------------------

class ThetaForm(str, Enum):
    GENERAL = "linear_general"
    PARALLEL = "parallel"
    COMPLETED_SQUARE = "completed_square"
    EXTENDED = "extended"


def theta_linear(traj: Linear, x, t: float, params: PhysicalParams,
                 form: ThetaForm = ThetaForm.GENERAL):
    """The phase theta(x, t) in the requested algebraic form.

    The general and completed-square forms differ by the constant
    m v1^2 w0 / (2 hbar dv); the parallel form requires v1 == v2.
    """
    m, hbar = params.mass, params.hbar
    x = np.asarray(x, dtype=float)
    w = traj.w0 + traj.dv * t
    if form == ThetaForm.GENERAL:
        num = traj.dv * x**2 + 2.0 * traj.v1 * traj.w0 * x \
            - traj.v1**2 * traj.w0 * t
        return m * num / (2.0 * hbar * w)
    if form == ThetaForm.COMPLETED_SQUARE:
        b = intersection_point(traj)
        return m * traj.dv * (x - b) ** 2 / (2.0 * hbar * w)
    if form == ThetaForm.PARALLEL:
        if traj.dv != 0.0:
            raise ParallelWalls("parallel form requires v1 == v2")
        v = traj.v1
        return (m * v * x - 0.5 * m * v**2 * t) / hbar
    if form == ThetaForm.EXTENDED:
        return transforms.extended_theta(traj, x, t, params)
    raise ValueError(f"unknown theta form {form!r}")


@dataclass(frozen=True)
class PhaseSpec:
    """A chosen algebraic form of theta bound to a trajectory and parameters."""

    form: ThetaForm
    traj: WallTrajectory
    params: PhysicalParams

    def __call__(self, x, t: float):
        if self.form == ThetaForm.EXTENDED or not isinstance(self.traj, Linear):
            return transforms.extended_theta(self.traj, x, t, self.params)
        return theta_linear(self.traj, x, t, self.params, self.form)


def intersection_point(traj: Linear) -> float:
    """b = -v1 w0 / dv, where the wall lines cross."""
    if traj.dv == 0.0:
        raise ParallelWalls("parallel walls never intersect")
    return -traj.v1 * traj.w0 / traj.dv


# ---------------------------------------------------------------------------
# moving-wall modes
# ---------------------------------------------------------------------------

def _domain_check(x: np.ndarray, w1: float, w2: float) -> None:
    tol = 1e-9 * (w2 - w1)
    if np.any(x < w1 - tol) or np.any(x > w2 + tol):
        raise OutOfDomain(f"x outside the well [{w1}, {w2}]")


def instantaneous_energy(n: int, traj: WallTrajectory, t: float,
                         params: PhysicalParams) -> float:
    """E_n(t) = (n hbar pi)^2 / (2 m w(t)^2)."""
    _check_mode(n)
    return (n * params.hbar * math.pi) ** 2 / (2.0 * params.mass
                                               * traj.state(t).w ** 2)


def dynamic_phase(n: int, traj: Linear, t: float,
                  params: PhysicalParams) -> float:
    """Closed form E_n^0 w0 t / (hbar w(t)) of int_0^t E_n(t') dt' / hbar."""
    _check_mode(n)
    e0 = static_energy(n, traj.w0, params)
    w = traj.w0 + traj.dv * t
    return e0 * traj.w0 * t / (params.hbar * w)


def dynamic_phase_integral(n: int, traj: WallTrajectory, t: float,
                           params: PhysicalParams) -> float:
    """int_0^t E_n(t') dt' / hbar, closed-form for Linear walls."""
    if isinstance(traj, Linear):
        return dynamic_phase(n, traj, t, params)
    _check_mode(n)
    coeff = (n * params.hbar * math.pi) ** 2 / (2.0 * params.mass * params.hbar)
    return coeff * adaptive_simpson(lambda s: 1.0 / float(traj.width(s)) ** 2,
                                    0.0, t)


def moving_wall_mode(n: int, traj: Linear, x, t: float,
                     params: PhysicalParams) -> np.ndarray:
    """Exact mode of the constant-velocity well (solution set above)."""
    _check_mode(n)
    s = traj.state(t)
    x = np.asarray(x, dtype=float)
    _domain_check(x, s.w1, s.w2)
    amp = math.sqrt(2.0 / s.w) * _sin_clamped(n, x - s.w1, s.w)
    phase = theta_linear(traj, x, t, params) - dynamic_phase(n, traj, t, params)
    return amp * np.exp(1j * phase)


def doescher_rice_mode(n: int, w0: float, dv: float, x, t: float,
                       params: PhysicalParams) -> np.ndarray:
    """The 1969 one-moving-wall solutions; identical to moving_wall_mode with
    v1 = 0, v2 = dv (the same formula in a different arrangement)."""
    _check_mode(n)
    m, hbar = params.mass, params.hbar
    w = w0 + dv * t
    if w <= 0:
        raise OutOfDomain(f"well has collapsed at t={t}")
    x = np.asarray(x, dtype=float)
    _domain_check(x, 0.0, w)
    e0 = static_energy(n, w0, params)
    amp = math.sqrt(2.0 / w) * _sin_clamped(n, x, w)
    phase = (m * dv * x**2 - 2.0 * e0 * w0 * t) / (2.0 * hbar * w)
    return amp * np.exp(1j * phase)


def slow_accel_mode(n: int, traj: WallTrajectory, x, t: float,
                    params: PhysicalParams, warn: bool = True) -> np.ndarray:
    """Approximate mode for slowly accelerating walls: instantaneous shape,
    extended gauge phase, and the integrated dynamic phase.

    Degrades when the slow-acceleration margin r(t) approaches 1; that is a
    warning, not an error.
    """
    _check_mode(n)
    s = traj.state(t)
    if warn:
        r = transforms.slow_accel_ratio(traj, t, params)
        if r >= 0.1:
            warnings.warn(f"slow-acceleration margin r={r:.3g} >= 0.1 at t={t}",
                          SlowAccelWarning, stacklevel=2)
    x = np.asarray(x, dtype=float)
    _domain_check(x, s.w1, s.w2)
    amp = math.sqrt(2.0 / s.w) * _sin_clamped(n, x - s.w1, s.w)
    phase = transforms.extended_theta(traj, x, t, params) \
        - dynamic_phase_integral(n, traj, t, params)
    return amp * np.exp(1j * phase)


# ---------------------------------------------------------------------------
# verification machinery
# ---------------------------------------------------------------------------

def schrodinger_residual(evaluator, grid: SpatialGrid, t: float, dt: float,
                         params: PhysicalParams,
                         energy_scale: float | None = None) -> float:
    """Normalized residual of i hbar d_t psi + (hbar^2/2m) d_xx psi.

    ``evaluator(x_array, time)`` must be defined at t - dt, t, t + dt on the
    grid.  Central differences in both variables give second-order accuracy,
    so the residual of an exact solution shrinks ~4x when the grid doubles.
    """
    m, hbar = params.mass, params.hbar
    x = grid.points
    h = grid.h
    psi_m = np.asarray(evaluator(x, t - dt), dtype=complex)
    psi_0 = np.asarray(evaluator(x, t), dtype=complex)
    psi_p = np.asarray(evaluator(x, t + dt), dtype=complex)
    dpsi_dt = (psi_p[1:-1] - psi_m[1:-1]) / (2.0 * dt)
    lap = (psi_0[2:] - 2.0 * psi_0[1:-1] + psi_0[:-2]) / h**2
    residual = 1j * hbar * dpsi_dt + (hbar**2 / (2.0 * m)) * lap
    if energy_scale is None:
        scale = float(np.max(np.abs((hbar**2 / (2.0 * m)) * lap)))
    else:
        scale = energy_scale * float(np.max(np.abs(psi_0)))
    if scale == 0.0:
        raise ValueError("residual scale is zero; pass energy_scale explicitly")
    return float(np.max(np.abs(residual))) / scale


def _instant_mode(n: int, x: np.ndarray, w1: float, w2: float) -> np.ndarray:
    w = w2 - w1
    out = np.zeros_like(x)
    inside = (x >= w1) & (x <= w2)
    out[inside] = math.sqrt(2.0 / w) * np.sin(n * np.pi * (x[inside] - w1) / w)
    return out


def berry_connection(n: int, walls: tuple[float, float], wall: int = 1,
                     n_points: int = 4097, rel_step: float = 2e-7) -> float:
    """<n(R) | d/dw_i | n(R)> by central differences and Simpson quadrature.

    Vanishes identically for the instantaneous well modes, which is why the
    geometric phase of the moving well is trivial; this routine is the
    numerical witness.
    """
    _check_mode(n)
    w1, w2 = walls
    if not w2 > w1:
        raise ValueError("walls must satisfy w2 > w1")
    if n_points % 2 == 0:
        n_points += 1
    delta = rel_step * (w2 - w1)
    x = np.linspace(w1 - delta, w2 + delta, n_points)
    base = _instant_mode(n, x, w1, w2)
    if wall == 1:
        plus = _instant_mode(n, x, w1 + delta, w2)
        minus = _instant_mode(n, x, w1 - delta, w2)
    elif wall == 2:
        plus = _instant_mode(n, x, w1, w2 + delta)
        minus = _instant_mode(n, x, w1, w2 - delta)
    else:
        raise ValueError("wall must be 1 or 2")
    integrand = base * (plus - minus) / (2.0 * delta)
    h = x[1] - x[0]
    return float(composite_simpson(integrand, h))
