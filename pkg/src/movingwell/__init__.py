"""Quantum particle in a 1-D infinite well with moving walls.

Analytic moving-wall solutions, Greenberger/extended frame transformations,
Gauss-sum revival prediction, a comoving-frame Crank-Nicolson solver, and
WKB perturbation tools for slowly accelerating walls.
"""

from .core import (COMOVING, ELECTRON_MASS_SI, HBAR_SI, LAB, NATURAL, SI,
                   ComplexField, Linear, Monomial, PhysicalParams, Sinusoidal,
                   SpatialGrid, Tabulated, UnitScales, WallState,
                   WallTrajectory, fidelity, inner_product, l2_norm,
                   normalized, resample, wall_state)
from .errors import (ConfigError, DegeneratePacket, FrameMismatch,
                     GridMismatch, MovingWellError, OutOfDomain, OutOfRange,
                     ParallelWalls, Singularity, SlowAccelWarning,
                     UnreachableTau, WallCollision)
from .analytic import (PhaseSpec, ThetaForm, berry_connection,
                       doescher_rice_mode, dynamic_phase,
                       dynamic_phase_integral, instantaneous_energy,
                       intersection_point, moving_wall_mode,
                       schrodinger_residual, slow_accel_mode, static_eigenmode,
                       static_energy, theta_linear)
from .transforms import (Displacement, InducedPotential, SlowAccelReport,
                         TauMap, TauPrimeLimits, appell_apply, appell_inverse,
                         comoving_forward, comoving_inverse, expansion_apply,
                         expansion_compose, extended_galilean_theta,
                         extended_theta, extended_theta_y, galilean_boost,
                         galilean_compose_theta, galilean_invert_theta,
                         greenberger_forward, greenberger_inverse,
                         induced_potential, instantaneous_intersection,
                         niederer_apply, slow_accel_check, slow_accel_ratio,
                         tau_prime_limit, w1dot_sq_integral)
from .revivals import (RevivalSpec, ThetaAtRational, extend_odd_periodic,
                       gauss_sum, gauss_sum_closed, propagator_oracle,
                       revival_schedule, revive_phi, revive_psi,
                       theta_rational)
from .solver import (CarpetRecord, EvolutionResult, LabEvolution, SolverConfig,
                     carpet, evolve_comoving, evolve_lab, gaussian_packet)
from .wkb import (PerturbingPotential, SineBasisResult, integral_delta_v,
                  sine_basis_oracle, wkb_energy, wkb_mode)

__version__ = "0.1.0"
