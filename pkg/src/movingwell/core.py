"""Physical parameters, wall trajectories, grids and sampled complex fields.

Everything downstream works on the types defined here.  The default unit
system is natural (hbar = m = 1 and lengths of order the initial well width);
SI values enter only through :class:`PhysicalParams` for closed-form
evaluations and through :class:`UnitScales` at the CLI boundary.

Conventions:
  * walls are w1(t) < w2(t), width w(t) = w2(t) - w1(t) > 0,
  * the wavefunction vanishes at the walls and is zero outside them,
  * fields are sampled on uniform grids and integrated by the trapezoid rule
    (the integrand vanishes at the walls, so no endpoint correction is needed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import GridMismatch, OutOfDomain, WallCollision

HBAR_SI = 1.054571817e-34       # J s
ELECTRON_MASS_SI = 9.1093837015e-31  # kg

NATURAL = "natural"
SI = "si"

# frame tags for ComplexField
LAB = "lab_x"
COMOVING = "comoving_y"


@dataclass(frozen=True)
class PhysicalParams:
    """hbar and particle mass, tagged with the unit system they live in."""

    hbar: float = 1.0
    mass: float = 1.0
    unit_system: str = NATURAL

    def __post_init__(self):
        if self.hbar <= 0 or self.mass <= 0:
            raise ValueError("hbar and mass must be positive")
        if self.unit_system not in (NATURAL, SI):
            raise ValueError(f"unknown unit system {self.unit_system!r}")

    @classmethod
    def natural(cls) -> "PhysicalParams":
        return cls(1.0, 1.0, NATURAL)

    @classmethod
    def si(cls, mass: float = ELECTRON_MASS_SI) -> "PhysicalParams":
        return cls(HBAR_SI, mass, SI)


@dataclass(frozen=True)
class UnitScales:
    """Conversion factors between an SI problem and its natural-unit twin.

    With length scale L (usually the initial well width) and mass m, the
    natural time unit is T = m L^2 / hbar; velocities scale as L/T and
    energies as hbar/T.  tau' is dimensionless and identical in both systems.
    """

    length: float
    mass: float = ELECTRON_MASS_SI
    hbar: float = HBAR_SI

    @property
    def time(self) -> float:
        return self.mass * self.length**2 / self.hbar

    @property
    def velocity(self) -> float:
        return self.length / self.time

    @property
    def energy(self) -> float:
        return self.hbar / self.time

    def to_natural_length(self, x):
        return np.asarray(x) / self.length

    def to_natural_time(self, t):
        return np.asarray(t) / self.time

    def to_natural_velocity(self, v):
        return np.asarray(v) / self.velocity

    def from_natural_length(self, x):
        return np.asarray(x) * self.length

    def from_natural_time(self, t):
        return np.asarray(t) * self.time


@dataclass(frozen=True)
class WallState:
    """Wall positions and their first two time derivatives at one instant."""

    t: float
    w1: float
    w2: float
    dw1: float
    dw2: float
    ddw1: float
    ddw2: float

    @property
    def w(self) -> float:
        return self.w2 - self.w1

    @property
    def dw(self) -> float:
        return self.dw2 - self.dw1

    @property
    def ddw(self) -> float:
        return self.ddw2 - self.ddw1


class WallTrajectory:
    """Base class: a pair of wall paths with analytic first/second derivatives.

    Subclasses implement :meth:`_eval` returning the six kinematic numbers at
    a time inside :meth:`domain`.  ``state`` validates the domain and the
    positivity of the width; a non-positive width is an error, never silent.
    """

    _closed_domain = False

    def domain(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def _eval(self, t: float) -> tuple[float, float, float, float, float, float]:
        raise NotImplementedError

    def state(self, t: float) -> WallState:
        lo, hi = self.domain()
        inside = (lo <= t <= hi) if self._closed_domain else (lo < t < hi)
        if not inside:
            raise OutOfDomain(f"t={t} outside trajectory domain ({lo}, {hi})")
        w1, dw1, ddw1, w2, dw2, ddw2 = self._eval(t)
        if not w2 - w1 > 0.0:
            raise WallCollision(f"well width {w2 - w1} <= 0 at t={t}")
        return WallState(t, w1, w2, dw1, dw2, ddw1, ddw2)

    def width(self, t):
        """Vectorized width w(t); raises WallCollision if any value <= 0."""
        t = np.asarray(t, dtype=float)
        w = self._width(t)
        if np.any(w <= 0.0):
            raise WallCollision("well width <= 0 on the queried times")
        return w

    def _width(self, t):
        # generic fallback; subclasses override with closed forms
        if t.ndim == 0:
            s = self.state(float(t))
            return np.asarray(s.w)
        return np.array([self.state(float(ti)).w for ti in t])


def wall_state(traj: WallTrajectory, t: float) -> WallState:
    """Positions and first two derivatives of both walls at time t."""
    return traj.state(t)


@dataclass(frozen=True)
class Linear(WallTrajectory):
    """w1(t) = v1 t, w2(t) = w0 + v2 t; width w(t) = w0 + (v2 - v1) t."""

    w0: float
    v1: float = 0.0
    v2: float = 0.0

    def __post_init__(self):
        if self.w0 <= 0:
            raise ValueError("initial width w0 must be positive")

    @property
    def dv(self) -> float:
        return self.v2 - self.v1

    def _eval(self, t):
        return (self.v1 * t, self.v1, 0.0, self.w0 + self.v2 * t, self.v2, 0.0)

    def _width(self, t):
        return self.w0 + self.dv * t

    def collision_time(self) -> float:
        """Time at which the walls meet (inf for non-contracting wells)."""
        if self.dv >= 0:
            return math.inf
        return -self.w0 / self.dv


@dataclass(frozen=True)
class Monomial(WallTrajectory):
    """Symmetric well with width w(t) = w0 (1 + t/T)^n, walls at +-w/2."""

    w0: float
    T: float
    n: float

    def __post_init__(self):
        if self.w0 <= 0:
            raise ValueError("w0 must be positive")
        if self.T <= 0:
            raise ValueError("T must be positive; negative-T wells are the t -> -T branch")

    def domain(self):
        return (-self.T, math.inf)

    def _eval(self, t):
        u = 1.0 + t / self.T
        w = self.w0 * u**self.n
        dw = self.w0 * self.n * u ** (self.n - 1.0) / self.T
        ddw = self.w0 * self.n * (self.n - 1.0) * u ** (self.n - 2.0) / self.T**2
        return (-w / 2, -dw / 2, -ddw / 2, w / 2, dw / 2, ddw / 2)

    def _width(self, t):
        return self.w0 * (1.0 + t / self.T) ** self.n


@dataclass(frozen=True)
class Sinusoidal(WallTrajectory):
    """Fixed lower wall at 0, upper wall w2(t) = w0 + a sin(omega t)."""

    w0: float
    amplitude: float
    omega: float

    def __post_init__(self):
        if self.w0 <= 0:
            raise ValueError("w0 must be positive")

    def _eval(self, t):
        a, om = self.amplitude, self.omega
        return (0.0, 0.0, 0.0,
                self.w0 + a * math.sin(om * t),
                a * om * math.cos(om * t),
                -a * om**2 * math.sin(om * t))

    def _width(self, t):
        return self.w0 + self.amplitude * np.sin(self.omega * t)


class Tabulated(WallTrajectory):
    """Walls given by time-ordered samples, interpolated with natural cubic
    splines so that the second derivative needed by the comoving potential is
    continuous."""

    def __init__(self, times, w1, w2):
        times = np.asarray(times, dtype=float)
        w1 = np.asarray(w1, dtype=float)
        w2 = np.asarray(w2, dtype=float)
        if times.ndim != 1 or len(times) < 4:
            raise ValueError("need at least 4 time samples")
        if not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        if np.any(w2 - w1 <= 0):
            raise WallCollision("tabulated width <= 0 at a sample")
        self.times = times
        self._s1 = CubicSpline(times, w1, bc_type="natural")
        self._s2 = CubicSpline(times, w2, bc_type="natural")

    _closed_domain = True

    def domain(self):
        return (float(self.times[0]), float(self.times[-1]))

    def _eval(self, t):
        return (float(self._s1(t)), float(self._s1(t, 1)), float(self._s1(t, 2)),
                float(self._s2(t)), float(self._s2(t, 1)), float(self._s2(t, 2)))

    def _width(self, t):
        return self._s2(t) - self._s1(t)


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid of n_points samples on [lo, hi]."""

    lo: float
    hi: float
    n_points: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("grid requires lo < hi")
        if self.n_points < 3:
            raise ValueError("grid requires at least 3 points")

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_points)

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n_points - 1)


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex amplitudes sampled on a grid, tagged with the frame they live in."""

    grid: SpatialGrid
    values: np.ndarray
    frame: str = LAB

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.n_points,):
            raise ValueError("values length must equal grid.n_points")
        if not np.all(np.isfinite(vals.view(float))):
            raise ValueError("field contains non-finite amplitudes")
        if self.frame not in (LAB, COMOVING):
            raise ValueError(f"unknown frame {self.frame!r}")

    def with_values(self, values) -> "ComplexField":
        return ComplexField(self.grid, values, self.frame)


def inner_product(f: ComplexField, g: ComplexField) -> complex:
    """Trapezoidal quadrature of the overlap integral of f* g."""
    if f.grid != g.grid:
        raise GridMismatch("inner_product requires identical grids")
    y = np.conj(f.values) * g.values
    return complex(f.grid.h * (np.sum(y) - 0.5 * (y[0] + y[-1])))


def l2_norm(f: ComplexField) -> float:
    return math.sqrt(max(inner_product(f, f).real, 0.0))


def normalized(f: ComplexField) -> ComplexField:
    nrm = l2_norm(f)
    if nrm == 0.0:
        raise ValueError("cannot normalize a zero field")
    return f.with_values(f.values / nrm)


def fidelity(f: ComplexField, g: ComplexField) -> float:
    """|<f, g>| / (|f| |g|), the phase-insensitive overlap."""
    return abs(inner_product(f, g)) / (l2_norm(f) * l2_norm(g))


def resample(f: ComplexField, grid: SpatialGrid) -> ComplexField:
    """Cubic resampling of a field onto a new grid.

    Real and imaginary parts are interpolated independently; points outside
    the source domain get amplitude exactly 0, the Dirichlet convention for
    anything beyond the walls.
    """
    if grid == f.grid:
        return ComplexField(grid, f.values.copy(), f.frame)
    x_src = f.grid.points
    sre = CubicSpline(x_src, f.values.real)
    sim = CubicSpline(x_src, f.values.imag)
    x = grid.points
    inside = (x >= f.grid.lo) & (x <= f.grid.hi)
    out = np.zeros(grid.n_points, dtype=complex)
    out[inside] = sre(x[inside]) + 1j * sim(x[inside])
    return ComplexField(grid, out, f.frame)
