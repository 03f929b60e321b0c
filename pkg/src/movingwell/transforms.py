"""Coordinate and gauge transformations between the lab and comoving frames.

The comoving frame y = (x - w1(t)) / w(t) maps the moving well onto the fixed
interval [0, 1].  The accompanying rescaled time tau obeys d tau/dt = 1/w^2,
and the dimensionless revival clock is tau' = (hbar pi / 2m) tau.  The gauge
phase theta that makes comoving evolution free-space-like is

    theta(x, t) = (m / 2 hbar) [ (wdot/w)(x - w1)^2 + 2 w1dot (x - w1)
                                 + int_0^t w1dot^2 dt' ]

which reduces, for walls moving at constant velocities, to the quadratic
phase m dv (x - b)^2 / (2 hbar w) about the wall intersection point b.

Also here: extended Galilean transformations (time-dependent translations and
their group-composition phases), the induced fictitious force/spring
coefficients, the slow-acceleration margin, and the expansion/Appell/Niederer
coordinate maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .core import (COMOVING, LAB, ComplexField, Linear, Monomial, PhysicalParams,
                   Sinusoidal, SpatialGrid, WallTrajectory)
from .errors import (FrameMismatch, OutOfRange, ParallelWalls, Singularity,
                     WallCollision)
from .quadrature import adaptive_simpson


# ---------------------------------------------------------------------------
# rescaled time tau and the revival clock tau'
# ---------------------------------------------------------------------------

class TauMap:
    """tau(t) = int_0^t dt'/w^2 and its inverse, closed-form where possible.

    Closed forms exist for Linear wells and Monomial widths; anything else
    falls back to adaptive quadrature plus bracketed monotone root finding
    (tau is strictly increasing wherever the width is positive).
    """

    def __init__(self, traj: WallTrajectory, params: PhysicalParams):
        self.traj = traj
        self.params = params
        if isinstance(traj, Linear):
            self.tag = "linear"
        elif isinstance(traj, Monomial):
            self.tag = "monomial_half" if traj.n == 0.5 else "monomial"
        else:
            self.tag = "numeric"

    # -- raw tau ------------------------------------------------------------

    def tau_of_t(self, t: float) -> float:
        if self.tag == "linear":
            w0 = self.traj.w0
            w = w0 + self.traj.dv * t
            if w <= 0:
                raise WallCollision(f"walls collided before t={t}")
            return t / (w0 * w)
        if self.tag == "monomial":
            tr = self.traj
            u = 1.0 + t / tr.T
            if u <= 0:
                raise WallCollision(f"t={t} is at or past the domain edge -T")
            sigma_raw = tr.T / (tr.w0**2 * (1.0 - 2.0 * tr.n))
            return sigma_raw * (u ** (1.0 - 2.0 * tr.n) - 1.0)
        if self.tag == "monomial_half":
            tr = self.traj
            u = 1.0 + t / tr.T
            if u <= 0:
                raise WallCollision(f"t={t} is at or past the domain edge -T")
            return tr.T / tr.w0**2 * math.log(u)
        return adaptive_simpson(lambda s: 1.0 / float(self.traj.width(s)) ** 2,
                                0.0, t)

    def t_of_tau(self, tau: float) -> float:
        if self.tag == "linear":
            w0, dv = self.traj.w0, self.traj.dv
            if dv != 0.0:
                bound = 1.0 / (w0 * dv)
                if dv > 0 and tau >= bound:
                    raise OutOfRange(f"tau={tau} >= supremum {bound}")
                if dv < 0 and tau <= bound:
                    raise OutOfRange(f"tau={tau} <= infimum {bound}")
            return w0**2 * tau / (1.0 - w0 * dv * tau)
        if self.tag == "monomial":
            tr = self.traj
            sigma_raw = tr.T / (tr.w0**2 * (1.0 - 2.0 * tr.n))
            base = 1.0 + tau / sigma_raw
            if base <= 0:
                raise OutOfRange(f"tau={tau} beyond the attainable range")
            return tr.T * (base ** (1.0 / (1.0 - 2.0 * tr.n)) - 1.0)
        if self.tag == "monomial_half":
            tr = self.traj
            return tr.T * (math.exp(tau * tr.w0**2 / tr.T) - 1.0)
        return self._invert_numeric(tau)

    def _invert_numeric(self, tau: float, rel_tol: float = 1e-12) -> float:
        if tau == 0.0:
            return 0.0
        lo_dom, hi_dom = self.traj.domain()
        # grow the bracket by doubling; tau is monotone so this terminates
        sign = 1.0 if tau > 0 else -1.0
        edge = hi_dom if tau > 0 else lo_dom
        t_try = sign
        for _ in range(200):
            if math.isfinite(edge) and sign * t_try >= sign * edge:
                t_try = edge
            val = self.tau_of_t(t_try)
            if sign * val >= sign * tau:
                break
            if t_try == edge:
                raise OutOfRange(f"tau={tau} not attained on the trajectory domain")
            t_try *= 2.0
        else:
            raise OutOfRange(f"tau={tau} not attained (bracket growth exhausted)")
        a, b = (0.0, t_try) if tau > 0 else (t_try, 0.0)
        root = brentq(lambda s: self.tau_of_t(s) - tau, a, b,
                      xtol=1e-30, rtol=max(rel_tol, 9.0e-16))
        return float(root)

    # -- dimensionless tau' ---------------------------------------------------

    @property
    def tau_prime_scale(self) -> float:
        return self.params.hbar * math.pi / (2.0 * self.params.mass)

    def tau_prime_of_t(self, t: float) -> float:
        return self.tau_prime_scale * self.tau_of_t(t)

    def t_of_tau_prime(self, tau_prime: float) -> float:
        return self.t_of_tau(tau_prime / self.tau_prime_scale)


def tau_of_t(tmap: TauMap, t: float) -> float:
    return tmap.tau_of_t(t)


def t_of_tau(tmap: TauMap, tau: float) -> float:
    return tmap.t_of_tau(tau)


def tau_prime_of_t(tmap: TauMap, t: float) -> float:
    return tmap.tau_prime_of_t(t)


def t_of_tau_prime(tmap: TauMap, tau_prime: float) -> float:
    return tmap.t_of_tau_prime(tau_prime)


@dataclass(frozen=True)
class TauPrimeLimits:
    """Behaviour of tau'(t) toward t -> +edge and t -> -edge.

    ``forward_bound`` is the supremum of tau' going forward in time (may be
    inf); ``forward_edge`` is the time at which it is approached (inf, a wall
    collision, or the domain boundary).  ``forward_attained`` marks bounds
    actually reached at a finite time (collisions, tabulated endpoints) as
    opposed to asymptotic suprema.  Same fields for the backward direction.
    """

    forward_bound: float
    forward_edge: float
    forward_attained: bool
    backward_bound: float
    backward_edge: float
    backward_attained: bool

    def reachable(self, tau_prime: float) -> bool:
        if tau_prime >= 0:
            if self.forward_attained:
                return tau_prime <= self.forward_bound
            return tau_prime < self.forward_bound
        if self.backward_attained:
            return tau_prime >= self.backward_bound
        return tau_prime > self.backward_bound


def tau_prime_limit(tmap: TauMap) -> TauPrimeLimits:
    """Classify the attainable range of tau' for the trajectory."""
    traj, pref = tmap.traj, tmap.tau_prime_scale
    inf = math.inf
    if isinstance(traj, Linear):
        w0, dv = traj.w0, traj.dv
        if dv > 0:
            return TauPrimeLimits(pref / (w0 * dv), inf, False,
                                  -inf, -w0 / dv, True)
        if dv < 0:
            return TauPrimeLimits(inf, -w0 / dv, True,
                                  pref / (w0 * dv), -inf, False)
        return TauPrimeLimits(inf, inf, False, -inf, -inf, False)
    if isinstance(traj, Monomial):
        n, T = traj.n, traj.T
        if n == 0.5:
            return TauPrimeLimits(inf, inf, False, -inf, -T, False)
        sigma = pref * T / (traj.w0**2 * (1.0 - 2.0 * n))
        fwd = (inf, inf, False) if n < 0.5 else (-sigma, inf, False)
        bwd = (-sigma, -T, False) if n < 0.5 else (-inf, -T, False)
        return TauPrimeLimits(*fwd, *bwd)
    if isinstance(traj, Sinusoidal):
        a, om = traj.amplitude, traj.omega
        if abs(a) < traj.w0 or om == 0.0 or a == 0.0:
            return TauPrimeLimits(inf, inf, False, -inf, -inf, False)
        # the moving wall reaches the fixed one; first collision each way
        if om < 0:  # sin(om t) = -sin(|om| t): same walls as (-a, |om|)
            a, om = -a, -om
        phi = math.asin(min(traj.w0 / abs(a), 1.0))
        if a > 0:
            t_fwd, t_bwd = (math.pi + phi) / om, -phi / om
        else:
            t_fwd, t_bwd = phi / om, -(math.pi + phi) / om
        return TauPrimeLimits(inf, t_fwd, True, -inf, t_bwd, True)
    # tabulated / custom: numeric scan over the (bounded) domain
    lo, hi = traj.domain()
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise OutOfRange("numeric tau' scan needs a bounded trajectory domain")
    return TauPrimeLimits(tmap.tau_prime_of_t(hi), hi, True,
                          tmap.tau_prime_of_t(lo), lo, True)


# ---------------------------------------------------------------------------
# Greenberger transformation (constant-velocity walls) and its extension
# ---------------------------------------------------------------------------

def _linear_theta_y(traj: Linear, y, t: float, params: PhysicalParams):
    """Gauge phase of the Greenberger map, as a function of y = (x - v1 t)/w."""
    m, hbar = params.mass, params.hbar
    w = traj.w0 + traj.dv * t
    if traj.dv != 0.0:
        c = -traj.v1 / traj.dv
        return m * traj.dv * w * (y - c) ** 2 / (2.0 * hbar)
    x = traj.w0 * y + traj.v1 * t
    return (m * traj.v1 * x - 0.5 * m * traj.v1**2 * t) / hbar


def greenberger_forward(psi: ComplexField, traj: Linear, t: float,
                        params: PhysicalParams) -> ComplexField:
    """Map a lab field at time t to the comoving field phi(y) at tau(t)."""
    if psi.frame != LAB:
        raise FrameMismatch("greenberger_forward expects a lab-frame field")
    s = traj.state(t)
    x = psi.grid.points
    y = (x - traj.v1 * t) / s.w
    theta = _linear_theta_y(traj, y, t, params)
    vals = math.sqrt(s.w) * psi.values * np.exp(-1j * theta)
    grid = SpatialGrid((psi.grid.lo - traj.v1 * t) / s.w,
                       (psi.grid.hi - traj.v1 * t) / s.w, psi.grid.n_points)
    return ComplexField(grid, vals, COMOVING)


def greenberger_inverse(phi: ComplexField, traj: Linear, t: float,
                        params: PhysicalParams) -> ComplexField:
    """Map a comoving field phi(y) back to the lab frame at time t."""
    if phi.frame != COMOVING:
        raise FrameMismatch("greenberger_inverse expects a comoving field")
    s = traj.state(t)
    y = phi.grid.points
    theta = _linear_theta_y(traj, y, t, params)
    vals = phi.values / math.sqrt(s.w) * np.exp(1j * theta)
    grid = SpatialGrid(phi.grid.lo * s.w + traj.v1 * t,
                       phi.grid.hi * s.w + traj.v1 * t, phi.grid.n_points)
    return ComplexField(grid, vals, LAB)


def w1dot_sq_integral(traj: WallTrajectory, t: float) -> float:
    """int_0^t w1dot^2 dt', closed-form for the analytic wall families."""
    if isinstance(traj, Linear):
        return traj.v1**2 * t
    if isinstance(traj, Sinusoidal):
        return 0.0  # lower wall fixed
    if isinstance(traj, Monomial):
        # w1dot = -wdot/2 with w = w0 (1 + t/T)^n
        w0, T, n = traj.w0, traj.T, traj.n
        if n == 0.0:
            return 0.0
        c = (w0 * n / (2.0 * T)) ** 2
        if n == 0.5:
            return c * T * math.log(1.0 + t / T)
        return c * T / (2.0 * n - 1.0) * ((1.0 + t / T) ** (2.0 * n - 1.0) - 1.0)
    return adaptive_simpson(lambda s: traj.state(s).dw1 ** 2, 0.0, t)


def extended_theta(traj: WallTrajectory, x, t: float,
                   params: PhysicalParams) -> np.ndarray:
    """Gauge phase for arbitrary C^2 walls, expressed in the lab coordinate."""
    s = traj.state(t)
    m, hbar = params.mass, params.hbar
    x = np.asarray(x, dtype=float)
    rel = x - s.w1
    return (m / (2.0 * hbar)) * ((s.dw / s.w) * rel**2 + 2.0 * s.dw1 * rel
                                 + w1dot_sq_integral(traj, t))


def extended_theta_y(traj: WallTrajectory, y, t: float,
                     params: PhysicalParams) -> np.ndarray:
    """Same phase as a function of the comoving coordinate y."""
    s = traj.state(t)
    m, hbar = params.mass, params.hbar
    y = np.asarray(y, dtype=float)
    return (m / (2.0 * hbar)) * (s.w * s.dw * y**2 + 2.0 * s.dw1 * s.w * y
                                 + w1dot_sq_integral(traj, t))


def instantaneous_intersection(traj: WallTrajectory, t: float) -> float:
    """b(t) = w1 - w1dot w / wdot, where the wall tangents cross."""
    s = traj.state(t)
    if s.dw == 0.0:
        raise ParallelWalls("wall tangents are parallel at this instant")
    return s.w1 - s.dw1 * s.w / s.dw


def comoving_forward(psi: ComplexField, traj: WallTrajectory, t: float,
                     params: PhysicalParams) -> ComplexField:
    """Extended Greenberger map psi(x, t) -> phi(y, tau) for arbitrary walls."""
    if psi.frame != LAB:
        raise FrameMismatch("comoving_forward expects a lab-frame field")
    s = traj.state(t)
    y = (psi.grid.points - s.w1) / s.w
    theta = extended_theta_y(traj, y, t, params)
    vals = math.sqrt(s.w) * psi.values * np.exp(-1j * theta)
    grid = SpatialGrid((psi.grid.lo - s.w1) / s.w, (psi.grid.hi - s.w1) / s.w,
                       psi.grid.n_points)
    return ComplexField(grid, vals, COMOVING)


def comoving_inverse(phi: ComplexField, traj: WallTrajectory, t: float,
                     params: PhysicalParams) -> ComplexField:
    """Inverse of :func:`comoving_forward` at lab time t."""
    if phi.frame != COMOVING:
        raise FrameMismatch("comoving_inverse expects a comoving field")
    s = traj.state(t)
    y = phi.grid.points
    theta = extended_theta_y(traj, y, t, params)
    vals = phi.values / math.sqrt(s.w) * np.exp(1j * theta)
    grid = SpatialGrid(phi.grid.lo * s.w + s.w1, phi.grid.hi * s.w + s.w1,
                       phi.grid.n_points)
    return ComplexField(grid, vals, LAB)


# ---------------------------------------------------------------------------
# Galilean boosts and extended Galilean transformations
# ---------------------------------------------------------------------------

def galilean_boost(psi: ComplexField, v: float, t: float,
                   params: PhysicalParams) -> ComplexField:
    """Boosted field psi'(x) = psi(x + v t) exp(-i (m v x + m v^2 t / 2)/hbar)."""
    if psi.frame != LAB:
        raise FrameMismatch("galilean_boost expects a lab-frame field")
    m, hbar = params.mass, params.hbar
    grid = SpatialGrid(psi.grid.lo - v * t, psi.grid.hi - v * t,
                       psi.grid.n_points)
    x = grid.points
    phase = np.exp(-1j * (m * v * x + 0.5 * m * v**2 * t) / hbar)
    return ComplexField(grid, psi.values * phase, LAB)


class Displacement:
    """A displacement path d(t) with analytic first and second derivatives."""

    def __init__(self, f: Callable[[float], float], df: Callable[[float], float],
                 ddf: Callable[[float], float]):
        self._f, self._df, self._ddf = f, df, ddf

    def __call__(self, t):
        return self._f(t)

    def dot(self, t):
        return self._df(t)

    def ddot(self, t):
        return self._ddf(t)

    def __add__(self, other: "Displacement") -> "Displacement":
        return Displacement(lambda t: self._f(t) + other._f(t),
                            lambda t: self._df(t) + other._df(t),
                            lambda t: self._ddf(t) + other._ddf(t))

    @classmethod
    def linear(cls, v: float) -> "Displacement":
        return cls(lambda t: v * t, lambda t: v, lambda t: 0.0)

    @classmethod
    def uniform_accel(cls, a: float) -> "Displacement":
        return cls(lambda t: 0.5 * a * t * t, lambda t: a * t, lambda t: a)

    @classmethod
    def sinusoidal(cls, amp: float, omega: float) -> "Displacement":
        return cls(lambda t: amp * math.sin(omega * t),
                   lambda t: amp * omega * math.cos(omega * t),
                   lambda t: -amp * omega**2 * math.sin(omega * t))


def extended_galilean_theta(d: Displacement, t: float, xp,
                            params: PhysicalParams):
    """Phase theta = (m/hbar) (ddot(t) x' + 1/2 int_0^t ddot^2 dt')."""
    m, hbar = params.mass, params.hbar
    kinetic = 0.5 * adaptive_simpson(lambda s: d.dot(s) ** 2, 0.0, t)
    return (m / hbar) * (d.dot(t) * np.asarray(xp) + kinetic)


def galilean_compose_theta(d1: Displacement, d2: Displacement, t: float, x2,
                           params: PhysicalParams):
    """Total phase after translating by d1 then d2, in the final frame.

    The second leg carries the non-inertial correction -int d1ddot d2, which
    is what makes the pair compose to the single translation d1 + d2 up to an
    x-independent constant.
    """
    m, hbar = params.mass, params.hbar
    x2 = np.asarray(x2)
    theta1 = (m / hbar) * (d1.dot(t) * (x2 + d2(t))
                           + 0.5 * adaptive_simpson(lambda s: d1.dot(s) ** 2, 0.0, t))
    corr = adaptive_simpson(lambda s: 0.5 * d2.dot(s) ** 2 - d1.ddot(s) * d2(s),
                            0.0, t)
    theta2 = (m / hbar) * (d2.dot(t) * x2 + corr)
    return theta1 + theta2


def galilean_invert_theta(d: Displacement, t: float, x,
                          params: PhysicalParams):
    """theta of the translation expressed in the original coordinate x."""
    m, hbar = params.mass, params.hbar
    integral = adaptive_simpson(lambda s: 0.5 * d.dot(s) ** 2 + d(s) * d.ddot(s),
                                0.0, t)
    return (m / hbar) * (d.dot(t) * np.asarray(x) - integral)


# ---------------------------------------------------------------------------
# induced fictitious potentials and the slow-acceleration margin
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InducedPotential:
    """Coefficients of the comoving fictitious potential f y + k y^2 / 2."""

    f: float
    k: float


def induced_potential(traj: WallTrajectory, t: float,
                      params: PhysicalParams) -> InducedPotential:
    """Force and spring coefficients f = m w^3 w1ddot, k = m w^3 wddot."""
    s = traj.state(t)
    w3 = s.w**3
    return InducedPotential(params.mass * w3 * s.ddw1, params.mass * w3 * s.ddw)


@dataclass(frozen=True)
class SlowAccelReport:
    """Result of scanning the slow-acceleration margin over an interval."""

    max_ratio: float
    t_worst: float
    threshold: float = 0.1

    @property
    def passed(self) -> bool:
        return self.max_ratio < self.threshold


def slow_accel_ratio(traj: WallTrajectory, t: float,
                     params: PhysicalParams) -> float:
    """r(t) = max_i |wddot_i| 2 w^3 (m / pi hbar)^2; slow means r << 1."""
    s = traj.state(t)
    scale = (params.mass / (math.pi * params.hbar)) ** 2
    return 2.0 * s.w**3 * max(abs(s.ddw1), abs(s.ddw2)) * scale


def slow_accel_check(traj: WallTrajectory, t_interval: tuple[float, float],
                     params: PhysicalParams, n_samples: int = 512,
                     threshold: float = 0.1) -> SlowAccelReport:
    """Scan the margin r(t) over an interval and report the worst point."""
    t0, t1 = t_interval
    ts = np.linspace(t0, t1, n_samples)
    ratios = [slow_accel_ratio(traj, float(t), params) for t in ts]
    i = int(np.argmax(ratios))
    return SlowAccelReport(float(ratios[i]), float(ts[i]), threshold)


# ---------------------------------------------------------------------------
# Niederer expansions and the Appell map
# ---------------------------------------------------------------------------

def expansion_apply(alpha: float, x: float, t: float) -> tuple[float, float]:
    """Expansion [alpha]: (x, t) -> (x, t) / (1 + alpha t)."""
    den = 1.0 + alpha * t
    if den == 0.0:
        raise Singularity(f"expansion is singular at t = {t}")
    return (x / den, t / den)


def expansion_compose(alpha1: float, alpha2: float) -> float:
    """Expansions form an additive group under composition."""
    return alpha1 + alpha2


def appell_apply(x: float, t: float) -> tuple[float, float]:
    """Appell map (x, t) -> (x/t, -1/t), a symmetry of the heat equation."""
    if t == 0.0:
        raise Singularity("Appell map is singular at t = 0")
    return (x / t, -1.0 / t)


def appell_inverse(x: float, t: float) -> tuple[float, float]:
    if t == 0.0:
        raise Singularity("inverse Appell map is singular at t = 0")
    return (-x / t, -1.0 / t)


def time_translate(b: float, x: float, t: float) -> tuple[float, float]:
    return (x, t + b)


def niederer_apply(d: float, alpha: float, b: float, a: float, v: float,
                   x: float, t: float) -> tuple[float, float]:
    """General 1-D Niederer element: dilation d, expansion alpha, time shift b,
    space shift a, boost v."""
    den = 1.0 + alpha * (t + b)
    if den == 0.0:
        raise Singularity(f"Niederer map is singular at t = {t}")
    return (d * (x + v * t + a) / den, d**2 * (t + b) / den)
