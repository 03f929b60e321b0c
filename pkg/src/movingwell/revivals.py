"""Fractional revivals at rational rescaled times via quadratic Gauss sums.

In the comoving frame the box propagator is a difference of Jacobi theta
functions, and at rational tau' = p/q the theta function collapses to a
finite comb of deltas at s/2q weighted by generalised quadratic Gauss sums

    c_s(p, 2q) = (1/2q) sum_{r=0}^{2q-1} exp(2 pi i ((p/2q) r^2 + (s/2q) r)).

The evolved field is then a superposition of q translated/mirrored copies of
the initial one:

    phi(y, p/q) = sum_s c_s(p, 2q)^* phi_ext(y - s/q)

where phi_ext is the odd, period-2 extension of phi(., 0).  Writing it with
the extension makes the wrapped translates unambiguous: each delta
contributes exactly where its preimage falls inside the box, which is the
support-restriction rule that keeps the map unitary (a literal sum of the
two bare terms would double-count the wrap-around copies).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .core import (COMOVING, ComplexField, Linear, PhysicalParams,
                   WallTrajectory)
from .errors import FrameMismatch, GridMismatch, UnreachableTau
from .transforms import (TauMap, comoving_forward, comoving_inverse,
                         greenberger_forward, greenberger_inverse,
                         tau_prime_limit)


@dataclass(frozen=True)
class RevivalSpec:
    """A reduced rational revival time tau' = p/q with p >= 0, q >= 1."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1 or self.p < 0:
            raise ValueError("require p >= 0 and q >= 1")
        g = math.gcd(self.p, self.q) if self.p > 0 else self.q
        object.__setattr__(self, "p", self.p // g if self.p else 0)
        object.__setattr__(self, "q", self.q // g if self.p else 1)

    @property
    def tau_prime(self) -> float:
        return self.p / self.q


def gauss_sum(p: int, q: int, s: int) -> complex:
    """Direct evaluation of c_s(p, 2q) with compensated summation."""
    if q < 1 or not 0 <= s < 2 * q:
        raise ValueError("require q >= 1 and 0 <= s < 2q")
    two_q = 2 * q
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j  # Kahan compensation: 128 unit-modulus terms at q=64
    for r in range(two_q):
        term = cmath.exp(2j * math.pi * ((p * r * r + s * r) / two_q))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total / two_q


def gauss_sum_closed(q: int, s: int) -> complex:
    """Closed form of c_s(1, 2q): (1/sqrt(q)) e^{i pi (1 - s^2/q)/4} when s
    and q share parity, zero otherwise."""
    if q < 1 or not 0 <= s < 2 * q:
        raise ValueError("require q >= 1 and 0 <= s < 2q")
    if (s - q) % 2 != 0:
        return 0.0 + 0.0j
    return cmath.exp(0.25j * math.pi * (1.0 - s * s / q)) / math.sqrt(q)


@dataclass(frozen=True)
class ThetaAtRational:
    """The nonzero delta comb of theta(y, p/q): locations s/2q and weights."""

    p: int
    q: int
    s_values: tuple[int, ...]
    locations: tuple[float, ...]
    coefficients: tuple[complex, ...]


@lru_cache(maxsize=256)
def theta_rational(p: int, q: int) -> ThetaAtRational:
    """All nonzero c_s(p, 2q) terms of the theta comb at tau' = p/q."""
    spec = RevivalSpec(p, q)
    p, q = spec.p, spec.q
    s_vals, locs, coeffs = [], [], []
    for s in range(2 * q):
        c = gauss_sum(p, q, s)
        if abs(c) > 1e-12:
            s_vals.append(s)
            locs.append(s / (2 * q))
            coeffs.append(c)
    return ThetaAtRational(p, q, tuple(s_vals), tuple(locs), tuple(coeffs))


# ---------------------------------------------------------------------------
# revival superpositions
# ---------------------------------------------------------------------------

def _check_unit_grid(phi: ComplexField) -> None:
    if abs(phi.grid.lo) > 1e-9 or abs(phi.grid.hi - 1.0) > 1e-9:
        raise GridMismatch("comoving field must live on [0, 1]")


def _odd_periodic_interpolator(phi: ComplexField):
    """Cubic interpolant of the odd, period-2 extension of a field on [0, 1]."""
    y = phi.grid.points
    sre = CubicSpline(y, phi.values.real)
    sim = CubicSpline(y, phi.values.imag)

    def evaluate(u):
        u = np.asarray(u, dtype=float)
        folded = np.mod(u + 1.0, 2.0) - 1.0  # into [-1, 1)
        neg = folded < 0.0
        arg = np.where(neg, -folded, folded)
        vals = sre(arg) + 1j * sim(arg)
        return np.where(neg, -vals, vals)

    return evaluate


def extend_odd_periodic(phi: ComplexField, y):
    """Value of the odd period-2 extension of phi at arbitrary y."""
    _check_unit_grid(phi)
    out = _odd_periodic_interpolator(phi)(y)
    if np.ndim(y) == 0:
        return complex(out)
    return out


def revive_phi(phi0: ComplexField, spec: RevivalSpec) -> ComplexField:
    """Comoving field at tau' = p/q as a Gauss-weighted sum of translates."""
    if phi0.frame != COMOVING:
        raise FrameMismatch("revive_phi expects a comoving field on [0, 1]")
    _check_unit_grid(phi0)
    comb = theta_rational(spec.p, spec.q)
    interp = _odd_periodic_interpolator(phi0)
    y = phi0.grid.points
    out = np.zeros(phi0.grid.n_points, dtype=complex)
    for s, c in zip(comb.s_values, comb.coefficients):
        out += np.conj(c) * interp(y - s / spec.q)
    return ComplexField(phi0.grid, out, COMOVING)


def revive_psi(psi0: ComplexField, traj: WallTrajectory, spec: RevivalSpec,
               params: PhysicalParams) -> tuple[ComplexField, float]:
    """Lab-frame revival: transform to the comoving box, apply the Gauss-sum
    superposition, and transform back at the revival time.

    Relative to the initial packet the copies are stretched by w(t)/w(0) and
    scaled by sqrt(w(0)/w(t)); their positions relative to the well width are
    unchanged.
    """
    tmap = TauMap(traj, params)
    limits = tau_prime_limit(tmap)
    tp = spec.tau_prime
    if not limits.reachable(tp):
        raise UnreachableTau(
            f"tau'={tp} is not attainable; supremum is {limits.forward_bound}")
    t_rev = tmap.t_of_tau_prime(tp)
    s0 = traj.state(0.0)
    if abs(psi0.grid.lo - s0.w1) > 1e-9 * s0.w or \
            abs(psi0.grid.hi - s0.w2) > 1e-9 * s0.w:
        raise GridMismatch("psi0 grid must span the well at t = 0")
    if isinstance(traj, Linear):
        phi0 = greenberger_forward(psi0, traj, 0.0, params)
        phi = revive_phi(phi0, spec)
        psi = greenberger_inverse(phi, traj, t_rev, params)
    else:
        phi0 = comoving_forward(psi0, traj, 0.0, params)
        phi = revive_phi(phi0, spec)
        psi = comoving_inverse(phi, traj, t_rev, params)
    return psi, t_rev


def revival_schedule(traj: WallTrajectory, q_max: int, t_max: float,
                     params: PhysicalParams) -> list[tuple[RevivalSpec, float]]:
    """All reduced p/q with q <= q_max whose revival occurs by t_max,
    sorted by revival time; unreachable fractions are omitted."""
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    tmap = TauMap(traj, params)
    limits = tau_prime_limit(tmap)
    out = []
    for q in range(1, q_max + 1):
        p = 0
        while True:
            p += 1
            if math.gcd(p, q) != 1:
                continue
            if not limits.reachable(p / q):
                break
            t_rev = tmap.t_of_tau_prime(p / q)
            if t_rev > t_max:
                break
            out.append((RevivalSpec(p, q), t_rev))
    out.sort(key=lambda item: item[1])
    return out


def propagator_oracle(phi0: ComplexField, tau_prime: float,
                      n_modes: int = 512) -> ComplexField:
    """Truncated eigenmode propagator: expand in sqrt(2) sin(n pi y), attach
    exp(-i pi n^2 tau'), resum.  Independent oracle for revive_phi and for
    the numerical solver."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    _check_unit_grid(phi0)
    y = phi0.grid.points
    h = phi0.grid.h
    weights = np.full(len(y), h)
    weights[0] = weights[-1] = 0.5 * h
    n = np.arange(1, n_modes + 1)
    basis = math.sqrt(2.0) * np.sin(np.pi * np.outer(n, y))
    coeffs = basis @ (phi0.values * weights)
    phases = np.exp(-1j * math.pi * n.astype(float) ** 2 * tau_prime)
    values = (coeffs * phases) @ basis
    return ComplexField(phi0.grid, values, phi0.frame)
