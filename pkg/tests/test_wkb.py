import math

import numpy as np
import pytest

import movingwell as mw
from movingwell.errors import OutOfDomain


def l2_overlap(a, b, y):
    num = abs(np.trapezoid(np.conj(a) * b, y))
    den = math.sqrt(np.trapezoid(np.abs(a) ** 2, y)
                    * np.trapezoid(np.abs(b) ** 2, y))
    return num / den


class TestIntegralDeltaV:
    @pytest.mark.parametrize("f,k,want", [(0.0, 0.0, 0.0),
                                          (1.0, 0.0, 0.5),
                                          (0.0, 6.0, 1.0)])
    def test_values(self, f, k, want):
        assert mw.integral_delta_v(mw.PerturbingPotential(f, k)) == \
            pytest.approx(want, abs=1e-15)


class TestWkbEnergy:
    def test_unperturbed(self, P):
        pot = mw.PerturbingPotential(0.0, 0.0)
        for n in range(1, 5):
            assert mw.wkb_energy(n, pot, P) == \
                pytest.approx((n * math.pi) ** 2 / 2, rel=1e-15)

    def test_shifted_ground_level(self, P):
        got = mw.wkb_energy(1, mw.PerturbingPotential(0.1, 0.0), P)
        assert got == pytest.approx(math.pi**2 / 2 + 0.05, rel=1e-15)

    def test_error_scales_quadratically_for_force_part(self, P):
        # |E_wkb - E_oracle| drops ~4x when the tilt halves.  This holds for
        # the linear (force) part, whose exact first-order shift <n|f y|n>
        # equals f/2 for every mode; the spring part carries an order-eps
        # mode-dependent correction (see test_spring_part below).
        base = mw.PerturbingPotential(1.0, 0.0)
        errs = []
        for eps in (0.2, 0.1, 0.05):
            pot = base.scaled(eps)
            oracle = mw.sine_basis_oracle(pot, 64)
            errs.append(abs(mw.wkb_energy(1, pot, P) - oracle.energies[0]))
        assert 3.0 < errs[0] / errs[1] < 5.0
        assert 3.0 < errs[1] / errs[2] < 5.0

    def test_spring_part_first_order_shift(self, P):
        # exact first-order shift of k y^2/2 is k (<y^2>_n)/2 with
        # <y^2>_n = 1/3 - 1/(2 n^2 pi^2): the WKB mean k/6 is approached
        # only as n grows
        eps = 1e-3
        oracle = mw.sine_basis_oracle(mw.PerturbingPotential(0.0, eps), 64)
        for n in (1, 2, 3):
            shift = (oracle.energies[n - 1] - (n * math.pi) ** 2 / 2) / eps
            exact = 1.0 / 6.0 - 1.0 / (4.0 * math.pi**2 * n**2)
            assert shift == pytest.approx(exact, abs=1e-5)


class TestWkbMode:
    def test_unperturbed_is_box_mode(self, P):
        y = np.linspace(0.0, 1.0, 501)
        pot = mw.PerturbingPotential(0.0, 0.0)
        got = mw.wkb_mode(2, pot, y, P)
        assert np.max(np.abs(got - math.sqrt(2) * np.sin(2 * np.pi * y))) \
            < 1e-12

    def test_boundary_values(self, P):
        pot = mw.PerturbingPotential(0.05, 0.02)
        assert mw.wkb_mode(1, pot, 0.0, P) == 0.0
        assert abs(mw.wkb_mode(1, pot, 1.0, P)) < 1e-8

    def test_out_of_domain(self, P):
        with pytest.raises(OutOfDomain):
            mw.wkb_mode(1, mw.PerturbingPotential(0.0, 0.0), 1.2, P)

    def test_phase_correction_shrinks_with_mode_number(self, P):
        # the bend scales as 1/n: the n=1 correction is 5x the n=5 one
        pot = mw.PerturbingPotential(0.3, 0.1)
        y = np.linspace(0.0, 1.0, 1001)

        def correction(n):
            exact = mw.wkb_mode(n, pot, y, P)
            phase = np.arcsin(np.clip(exact / math.sqrt(2), -1, 1))
            return (P.mass / (P.hbar**2 * n * math.pi)) \
                * (0.5 * pot.f * y * (1 - y) + pot.k / 6 * y * (1 - y**2))

        c1, c5 = correction(1), correction(5)
        assert np.max(np.abs(c1)) / np.max(np.abs(c5)) == pytest.approx(5.0,
                                                                        rel=1e-9)

    def test_converges_to_unperturbed_linearly(self, P):
        y = np.linspace(0.0, 1.0, 501)
        base = mw.PerturbingPotential(1.0, 1.0)
        unperturbed = math.sqrt(2) * np.sin(np.pi * y)
        sups = []
        for eps in (0.2, 0.1, 0.05):
            got = mw.wkb_mode(1, base.scaled(eps), y, P)
            sups.append(np.max(np.abs(got - unperturbed)))
        assert sups[0] / sups[1] == pytest.approx(2.0, rel=0.05)
        assert sups[1] / sups[2] == pytest.approx(2.0, rel=0.05)


class TestSineBasisOracle:
    def test_unperturbed_spectrum_exact(self, P):
        oracle = mw.sine_basis_oracle(mw.PerturbingPotential(0.0, 0.0), 32)
        want = (np.arange(1, 33) * math.pi) ** 2 / 2
        assert np.max(np.abs(oracle.energies - want)) < 1e-12

    def test_ground_energy_with_linear_tilt(self, P):
        oracle = mw.sine_basis_oracle(mw.PerturbingPotential(0.1, 0.0), 64)
        assert oracle.energies[0] == pytest.approx(math.pi**2 / 2 + 0.05,
                                                   abs=1e-4)
        # doubling the basis changes nothing at this scale
        bigger = mw.sine_basis_oracle(mw.PerturbingPotential(0.1, 0.0), 128)
        assert abs(oracle.energies[0] - bigger.energies[0]) < 1e-10

    def test_eigenmode_overlap_with_wkb(self, P):
        pot = mw.PerturbingPotential(1.0, 1.0).scaled(0.01)
        oracle = mw.sine_basis_oracle(pot, 64)
        y = np.linspace(0.0, 1.0, 2001)
        assert l2_overlap(mw.wkb_mode(1, pot, y, P),
                          oracle.mode_values(0, y), y) >= 0.999

    def test_basis_size_validation(self):
        with pytest.raises(ValueError):
            mw.sine_basis_oracle(mw.PerturbingPotential(0.0, 0.0), 4)


class TestFirstOrderShift:
    # the common-shift statements hold exactly for the force part f y; the
    # spring part is covered by TestWkbEnergy.test_spring_part_first_order_shift
    def test_shift_matches_integral_as_eps_to_zero(self, P):
        base = mw.PerturbingPotential(1.0, 0.0)
        unit_shift = mw.integral_delta_v(base)
        eps = 1e-3
        oracle = mw.sine_basis_oracle(base.scaled(eps), 64)
        got = (oracle.energies[0] - math.pi**2 / 2) / eps
        assert got == pytest.approx(unit_shift, rel=0.01)

    def test_shift_is_mode_independent_to_first_order(self, P):
        base = mw.PerturbingPotential(1.0, 0.0)
        ns = np.arange(1, 7)
        unperturbed = (ns * math.pi) ** 2 / 2

        def max_dev(eps):
            oracle = mw.sine_basis_oracle(base.scaled(eps), 64)
            shifts = oracle.energies[:6] - unperturbed
            return np.max(np.abs(shifts - mw.integral_delta_v(base.scaled(eps))))

        d1, d2 = max_dev(0.02), max_dev(0.01)
        assert 3.0 < d1 / d2 < 5.0  # deviation is O(eps^2)
