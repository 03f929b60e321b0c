"""WKB eigenmodes and energies of the box under the fictitious potential.

The comoving Hamiltonian for accelerating walls is the free box plus
dV(y) = f y + k y^2 / 2 on [0, 1].  To first order the perturbation shifts
every level by the same amount int_0^1 dV = f/2 + k/6, and bends the mode
phase by

    phi_n(y) ~ sqrt(2) sin( n pi y + (m / (hbar^2 n pi))
                            [ (f/2) y (1 - y) + (k/6) y (1 - y^2) ] ).

The phase-correction prefactor follows from redoing the binomial expansion
of the WKB integral; it scales as 1/n, so the shape correction dies off for
higher modes.  A sine-basis diagonalization is the independent oracle all of
this is tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalParams
from .errors import OutOfDomain


@dataclass(frozen=True)
class PerturbingPotential:
    """dV(y) = f y + k y^2 / 2 on the unit box."""

    f: float
    k: float

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return self.f * y + 0.5 * self.k * y**2

    def scaled(self, eps: float) -> "PerturbingPotential":
        return PerturbingPotential(eps * self.f, eps * self.k)


def integral_delta_v(pot: PerturbingPotential) -> float:
    """int_0^1 dV = f/2 + k/6."""
    return 0.5 * pot.f + pot.k / 6.0


def wkb_energy(n: int, pot: PerturbingPotential,
               params: PhysicalParams) -> float:
    """First-order level: unperturbed box energy plus the common shift."""
    if n < 1:
        raise ValueError("mode number must be >= 1")
    e0 = (params.hbar * n * math.pi) ** 2 / (2.0 * params.mass)
    return e0 + integral_delta_v(pot)


def wkb_mode(n: int, pot: PerturbingPotential, y,
             params: PhysicalParams) -> np.ndarray:
    """WKB mode shape on [0, 1]; vanishes at both walls by construction."""
    if n < 1:
        raise ValueError("mode number must be >= 1")
    y = np.asarray(y, dtype=float)
    if np.any(y < 0.0) or np.any(y > 1.0):
        raise OutOfDomain("y outside [0, 1]")
    m, hbar = params.mass, params.hbar
    corr = (m / (hbar**2 * n * math.pi)) * (0.5 * pot.f * y * (1.0 - y)
                                            + pot.k / 6.0 * y * (1.0 - y**2))
    out = math.sqrt(2.0) * np.sin(n * math.pi * y + corr)
    return np.where((y == 0.0) | (y == 1.0), 0.0, out)


@dataclass
class SineBasisResult:
    """Sorted eigenpairs of the perturbed box in the sine basis."""

    energies: np.ndarray
    vectors: np.ndarray  # column j = coefficients of eigenmode j

    def mode_values(self, index: int, y) -> np.ndarray:
        """Eigenmode as a function on [0, 1], sign-fixed so its dominant
        sine coefficient is positive."""
        y = np.asarray(y, dtype=float)
        vec = self.vectors[:, index]
        if vec[np.argmax(np.abs(vec))] < 0:
            vec = -vec
        n = np.arange(1, len(vec) + 1)
        basis = math.sqrt(2.0) * np.sin(math.pi * np.outer(n, y))
        return vec @ basis


def sine_basis_oracle(pot: PerturbingPotential, n_basis: int = 64,
                      params: PhysicalParams | None = None,
                      n_quad: int = 2049) -> SineBasisResult:
    """Diagonalize kinetic + dV in the first n_basis sine modes.

    Matrix elements of dV come from composite Simpson quadrature, so the
    oracle shares no algebra with the WKB formulas it checks.
    """
    if n_basis < 8:
        raise ValueError("n_basis must be >= 8")
    if params is None:
        params = PhysicalParams.natural()
    if n_quad % 2 == 0:
        n_quad += 1
    y = np.linspace(0.0, 1.0, n_quad)
    h = y[1] - y[0]
    dv = pot(y)
    wts = np.full(n_quad, 2.0 * h / 3.0)
    wts[1::2] = 4.0 * h / 3.0
    wts[0] = wts[-1] = h / 3.0
    n = np.arange(1, n_basis + 1)
    basis = math.sqrt(2.0) * np.sin(math.pi * np.outer(n, y))
    hmat = (basis * (wts * dv)) @ basis.T
    hmat = 0.5 * (hmat + hmat.T)
    kinetic = (params.hbar * n * math.pi) ** 2 / (2.0 * params.mass)
    hmat[np.diag_indices_from(hmat)] += kinetic
    energies, vectors = np.linalg.eigh(hmat)
    return SineBasisResult(energies=energies, vectors=vectors)
