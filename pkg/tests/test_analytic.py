import math

import numpy as np
import pytest

import movingwell as mw
from movingwell.errors import OutOfDomain, ParallelWalls, SlowAccelWarning
from movingwell.quadrature import adaptive_simpson


class TestStaticWell:
    def test_mode_value(self):
        assert mw.static_eigenmode(1, 1.0, 0.5) == pytest.approx(math.sqrt(2))

    def test_mode_vanishes_at_walls_exactly(self):
        assert mw.static_eigenmode(3, 1.0, 0.0) == 0.0
        assert mw.static_eigenmode(3, 1.0, 1.0) == 0.0

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            mw.static_eigenmode(1, 1.0, 1.5)

    def test_energy_natural(self, P):
        assert mw.static_energy(1, 1.0, P) == pytest.approx(math.pi**2 / 2)

    def test_energy_si_electron_1nm(self, P_si):
        # (hbar pi)^2 / (2 m w^2) for a 1 nm box
        assert mw.static_energy(1, 1e-9, P_si) == pytest.approx(6.02e-20, rel=1e-2)

    def test_mode_number_validation(self):
        with pytest.raises(ValueError):
            mw.static_energy(0, 1.0, mw.PhysicalParams.natural())


class TestThetaForms:
    def test_static_is_zero(self, P):
        x = np.linspace(0, 1, 11)
        assert np.all(mw.theta_linear(mw.Linear(1.0), x, 0.5, P) == 0.0)

    def test_parallel_form(self, P):
        v, t = 0.7, 1.3
        x = np.linspace(0, 1, 11)
        got = mw.theta_linear(mw.Linear(1.0, v, v), x, t, P,
                              mw.ThetaForm.PARALLEL)
        assert np.allclose(got, v * x - 0.5 * v**2 * t, atol=1e-14)

    def test_general_value(self, P):
        # w0=1, v1=0, v2=1 at (x,t)=(1,1): dv x^2 / (2 w) = 1/4
        got = mw.theta_linear(mw.Linear(1.0, 0.0, 1.0), 1.0, 1.0, P)
        assert got == pytest.approx(0.25, abs=1e-15)

    def test_completed_square_differs_by_stated_constant(self, P):
        traj = mw.Linear(1.0, -0.4, 0.6)
        x = np.linspace(traj.state(0.7).w1, traj.state(0.7).w2, 41)
        general = mw.theta_linear(traj, x, 0.7, P)
        square = mw.theta_linear(traj, x, 0.7, P, mw.ThetaForm.COMPLETED_SQUARE)
        diff = square - general
        const = P.mass * traj.v1**2 * traj.w0 / (2 * P.hbar * traj.dv)
        assert np.var(diff) < 1e-20
        assert diff[0] == pytest.approx(const, rel=1e-12)

    def test_parallel_form_requires_parallel(self, P):
        with pytest.raises(ParallelWalls):
            mw.theta_linear(mw.Linear(1.0, 0.0, 1.0), 0.5, 0.1, P,
                            mw.ThetaForm.PARALLEL)

    def test_parallel_limit_is_cauchy(self, P):
        # completed square at dv = 10^-k converges to the parallel phase
        x = np.linspace(0.1, 0.9, 33)
        t, v1 = 0.4, 0.5
        ref = mw.theta_linear(mw.Linear(1.0, v1, v1), x, t, P,
                              mw.ThetaForm.PARALLEL)
        devs = []
        for k in range(1, 7):
            traj = mw.Linear(1.0, v1, v1 + 10.0**-k)
            th = mw.theta_linear(traj, x, t, P, mw.ThetaForm.COMPLETED_SQUARE)
            diff = th - ref
            devs.append(np.max(np.abs(diff - diff.mean())))
        assert all(b < 0.2 * a for a, b in zip(devs, devs[1:]))
        assert devs[-1] < 1e-4

    def test_phase_spec_dispatch(self, P):
        traj = mw.Linear(1.0, 0.0, 1.0)
        x = np.linspace(0.0, 1.5, 21)
        spec_g = mw.PhaseSpec(mw.ThetaForm.GENERAL, traj, P)
        spec_e = mw.PhaseSpec(mw.ThetaForm.EXTENDED, traj, P)
        diff = spec_g(x, 0.5) - spec_e(x, 0.5)
        assert np.var(diff) < 1e-20


class TestIntersectionPoint:
    def test_lower_wall_through_origin(self):
        assert mw.intersection_point(mw.Linear(1.0, 0.0, 1.0)) == 0.0

    def test_symmetric_walls(self):
        b = mw.intersection_point(mw.Linear(1.0, -1.0, 1.0))
        assert b == pytest.approx(0.5)

    def test_geometric_meaning(self):
        traj = mw.Linear(1.0, -1.0, 1.0)
        b = mw.intersection_point(traj)
        t_star = -traj.w0 / traj.dv
        # both wall lines pass through (b, t*)
        assert traj.v1 * t_star == pytest.approx(b)
        assert traj.w0 + traj.v2 * t_star == pytest.approx(b)

    def test_parallel_raises(self):
        with pytest.raises(ParallelWalls):
            mw.intersection_point(mw.Linear(1.0, 0.3, 0.3))


class TestMovingWallMode:
    def test_initial_instant_matches_static_with_phase(self, P):
        traj = mw.Linear(1.0, -0.2, 0.8)
        x = np.linspace(0.0, 1.0, 301)
        got = mw.moving_wall_mode(2, traj, x, 0.0, P)
        want = mw.static_eigenmode(2, 1.0, x) \
            * np.exp(1j * mw.theta_linear(traj, x, 0.0, P))
        assert np.max(np.abs(got - want)) < 1e-13

    def test_vanishes_at_walls(self, P):
        traj = mw.Linear(1.0, 0.3, 1.1)
        s = traj.state(0.7)
        vals = mw.moving_wall_mode(1, traj, np.array([s.w1, s.w2]), 0.7, P)
        assert np.all(vals == 0.0)

    def test_out_of_domain(self, P):
        with pytest.raises(OutOfDomain):
            mw.moving_wall_mode(1, mw.Linear(1.0), 1.2, 0.0, P)

    def test_residual_small(self, P):
        traj = mw.Linear(1.0, 0.0, 1.0)
        t = 1.0
        s = traj.state(t)
        grid = mw.SpatialGrid(s.w1 + 0.02, s.w2 - 0.02, 2048)
        res = mw.schrodinger_residual(
            lambda x, tt: mw.moving_wall_mode(1, traj, x, tt, P),
            grid, t, 2e-5, P)
        assert res < 1e-6

    def test_orthonormal_gram(self, P):
        traj = mw.Linear(1.0, -0.3, 0.9)
        t = 0.8
        s = traj.state(t)
        grid = mw.SpatialGrid(s.w1, s.w2, 4096)
        modes = [mw.ComplexField(grid, mw.moving_wall_mode(n, traj, grid.points, t, P))
                 for n in range(1, 9)]
        gram = np.array([[mw.inner_product(a, b) for b in modes] for a in modes])
        off = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off)) < 1e-8
        assert np.max(np.abs(np.diag(gram) - 1.0)) < 1e-6


class TestDoescherRice:
    def test_static_limit(self, P):
        x = np.linspace(0.0, 1.0, 65)
        t = 0.9
        got = mw.doescher_rice_mode(2, 1.0, 0.0, x, t, P)
        want = mw.static_eigenmode(2, 1.0, x) \
            * np.exp(-1j * mw.static_energy(2, 1.0, P) * t / P.hbar)
        assert np.max(np.abs(got - want)) < 1e-13

    def test_equals_moving_wall_mode(self, P):
        dv, t = 0.8, 0.6
        x = np.linspace(0.0, 1.0 + dv * t, 128)
        a = mw.doescher_rice_mode(3, 1.0, dv, x, t, P)
        b = mw.moving_wall_mode(3, mw.Linear(1.0, 0.0, dv), x, t, P)
        assert np.max(np.abs(a - b)) < 1e-12

    def test_boost_reproduces_two_moving_walls(self, P):
        # boosting the one-wall solution by -v1 gives the general solution
        w0, v1, dv, t, n = 1.0, -0.3, 0.9, 0.8, 2
        grid = mw.SpatialGrid(0.0, w0 + dv * t, 512)
        dr = mw.ComplexField(grid,
                             mw.doescher_rice_mode(n, w0, dv, grid.points, t, P))
        boosted = mw.galilean_boost(dr, -v1, t, P)
        target = mw.moving_wall_mode(n, mw.Linear(w0, v1, v1 + dv),
                                     boosted.grid.points, t, P)
        assert np.max(np.abs(boosted.values - target)) < 1e-12


class TestBerryConnection:
    def test_ground_mode_unit_well(self):
        assert abs(mw.berry_connection(1, (0.0, 1.0))) < 1e-8

    def test_excited_mode_shifted_well(self):
        assert abs(mw.berry_connection(3, (0.2, 1.7))) < 1e-8

    def test_upper_wall_variant(self):
        assert abs(mw.berry_connection(2, (0.0, 1.0), wall=2)) < 1e-8

    def test_integrand_antiderivative_identity(self):
        # d(u sin^2 u)/du = sin^2 u + 2u sin u cos u, checked at u = 0.3
        u, du = 0.3, 1e-6
        f = lambda v: v * math.sin(v) ** 2
        numeric = (f(u + du) - f(u - du)) / (2 * du)
        analytic = math.sin(u) ** 2 + 2 * u * math.sin(u) * math.cos(u)
        assert numeric == pytest.approx(analytic, abs=1e-10)


class TestDynamicPhase:
    def test_zero_time(self, P):
        assert mw.dynamic_phase(1, mw.Linear(1.0, 0.0, 1.0), 0.0, P) == 0.0

    def test_static_width(self, P):
        t = 1.7
        got = mw.dynamic_phase(2, mw.Linear(1.0, 0.5, 0.5), t, P)
        assert got == pytest.approx(mw.static_energy(2, 1.0, P) * t / P.hbar)

    def test_matches_quadrature(self, P):
        traj = mw.Linear(1.0, 0.0, 1.0)
        got = mw.dynamic_phase(1, traj, 1.0, P)
        quad = adaptive_simpson(
            lambda s: mw.instantaneous_energy(1, traj, s, P) / P.hbar, 0.0, 1.0)
        assert got == pytest.approx(math.pi**2 / 4, rel=1e-12)
        assert got == pytest.approx(quad, rel=1e-9)

    def test_general_integral_nonlinear(self, P):
        traj = mw.Sinusoidal(1.0, 0.1, 2.0)
        got = mw.dynamic_phase_integral(2, traj, 1.3, P)
        quad = adaptive_simpson(
            lambda s: mw.instantaneous_energy(2, traj, s, P) / P.hbar, 0.0, 1.3)
        assert got == pytest.approx(quad, rel=1e-9)


class TestSlowAccelMode:
    def test_linear_reduces_to_moving_wall_mode(self, P):
        traj = mw.Linear(1.0, -0.2, 0.6)
        t = 0.9
        s = traj.state(t)
        x = np.linspace(s.w1, s.w2, 257)
        a = mw.slow_accel_mode(2, traj, x, t, P)
        b = mw.moving_wall_mode(2, traj, x, t, P)
        ratio = a[1:-1] / b[1:-1]
        assert np.max(np.abs(ratio - ratio[0])) < 1e-9
        assert abs(abs(ratio[0]) - 1.0) < 1e-12

    def test_vanishes_at_walls(self, P):
        traj = mw.Sinusoidal(1.0, 0.05, 0.1)
        s = traj.state(3.0)
        vals = mw.slow_accel_mode(1, traj, np.array([s.w1, s.w2]), 3.0, P)
        assert np.all(vals == 0.0)

    def test_warns_when_criterion_violated(self, P):
        fast = mw.Sinusoidal(1.0, 0.2, 8.0)
        s = fast.state(0.2)
        with pytest.warns(SlowAccelWarning):
            mw.slow_accel_mode(1, fast, 0.5 * (s.w1 + s.w2), 0.2, P)


class TestSchrodingerResidual:
    def test_static_mode(self, P):
        grid = mw.SpatialGrid(0.0, 1.0, 512)
        ev = lambda x, t: mw.static_eigenmode(1, 1.0, x) \
            * np.exp(-1j * mw.static_energy(1, 1.0, P) * t / P.hbar)
        assert mw.schrodinger_residual(ev, grid, 0.3, 1e-4, P) < 1e-5

    def test_moving_mode_and_convergence_order(self, P):
        traj = mw.Linear(1.0, 0.0, 1.0)
        t = 1.0
        s = traj.state(t)
        ev = lambda x, tt: mw.moving_wall_mode(2, traj, x, tt, P)
        res = {}
        for n_pts in (1024, 2048):
            grid = mw.SpatialGrid(s.w1 + 0.02, s.w2 - 0.02, n_pts)
            res[n_pts] = mw.schrodinger_residual(ev, grid, t, 0.05 * grid.h, P)
        assert res[1024] < 1e-4
        assert 3.0 < res[1024] / res[2048] < 5.0

    def test_corrupted_phase_is_rejected(self, P):
        traj = mw.Linear(1.0, 0.0, 1.0)
        t = 1.0
        s = traj.state(t)
        grid = mw.SpatialGrid(s.w1 + 0.02, s.w2 - 0.02, 1024)

        def no_theta(x, tt):
            st = traj.state(tt)
            return np.sqrt(2 / st.w) * np.sin(2 * np.pi * (x - st.w1) / st.w) \
                * np.exp(-1j * mw.dynamic_phase(2, traj, tt, P))

        assert mw.schrodinger_residual(no_theta, grid, t, 1e-5, P) > 0.1
