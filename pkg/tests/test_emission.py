"""Unit tests for cross sections, rates, and the Klein-Nishina oracle."""

import math

import numpy as np
import pytest

from qfel.beamfield import LaserField, make_beam
from qfel.emission import (angular_spectrum, averaged_cross_section,
                           diff_cross_section, klein_nishina_reference,
                           klein_nishina_rest, transition_rate_density)
from qfel.errors import DomainError
from qfel.kinematics import solve_final_state

LASER = LaserField(785.0, 1e19)
BEAM = make_beam(307.0)


class TestSingleChannel:
    def test_nonnegative(self):
        kin = solve_final_state(0.9 * math.pi, 1, BEAM, LASER)
        for sel in (1, 2):
            for sigma in (1, -1):
                for sp in (sigma, -sigma):
                    pt = diff_cross_section(kin, BEAM, LASER, sigma, sp, sel)
                    assert pt.value >= 0.0

    def test_stimulated_scaling(self):
        # occupation N multiplies every channel by N + 1
        kin = solve_final_state(0.95 * math.pi, 1, BEAM, LASER)
        base = diff_cross_section(kin, BEAM, LASER, 1, 1, 1).value
        for n_occ in (1, 4, 99):
            got = diff_cross_section(kin, BEAM, LASER, 1, 1, 1,
                                     n_occ=n_occ).value
            assert got == pytest.approx((n_occ + 1) * base, rel=1e-12)

    def test_basis_sum_equals_vector_projection(self):
        kin = solve_final_state(0.9 * math.pi, 1, BEAM, LASER)
        b1 = diff_cross_section(kin, BEAM, LASER, 1, 1, 1).value
        b2 = diff_cross_section(kin, BEAM, LASER, 1, 1, 2).value
        circ = diff_cross_section(
            kin, BEAM, LASER, 1, 1,
            (1.0 / math.sqrt(2.0), 1.0j / math.sqrt(2.0))).value
        assert circ <= b1 + b2 + 1e-12 * (b1 + b2)

    def test_unnormalized_pair_rejected(self):
        kin = solve_final_state(0.9 * math.pi, 1, BEAM, LASER)
        with pytest.raises(DomainError):
            diff_cross_section(kin, BEAM, LASER, 1, 1, (1.0, 1.0))

    def test_bad_basis_index(self):
        kin = solve_final_state(0.9 * math.pi, 1, BEAM, LASER)
        with pytest.raises(DomainError):
            diff_cross_section(kin, BEAM, LASER, 1, 1, 3)


class TestRateCrossSectionConsistency:
    def test_ratio_is_flux_factor(self):
        # the rate per unit volume and the cross section are independent
        # evaluations of the same matrix element; their ratio must be the
        # flux-normalization factor |p_z| / (4 pi^2 E) exactly
        want = abs(BEAM.pz) / (4.0 * math.pi ** 2 * BEAM.energy)
        for frac in (0.5, 0.9, 0.999):
            for n in (1, 2):
                kin = solve_final_state(frac * math.pi, n, BEAM, LASER)
                for sigma, sp, i in ((1, 1, 1), (1, -1, 2), (-1, -1, 1)):
                    xs = diff_cross_section(kin, BEAM, LASER, sigma, sp,
                                            i).value
                    if xs == 0.0:
                        continue
                    rate = transition_rate_density(kin, BEAM, LASER, sigma,
                                                   sp, i)
                    assert rate / xs == pytest.approx(want, rel=1e-10)


class TestAveraged:
    def test_forward_value_scale(self):
        pt = averaged_cross_section(math.pi, BEAM, LASER)
        assert 1e6 * pt.value == pytest.approx(1.15, rel=0.05)

    def test_azimuth_independent(self):
        ref = averaged_cross_section(0.98 * math.pi, BEAM, LASER).value
        for phi in (0.7, 2.9):
            got = averaged_cross_section(0.98 * math.pi, BEAM, LASER,
                                         phi_k=phi).value
            assert got == pytest.approx(ref, rel=1e-12)

    def test_truncation_stable(self):
        for frac in (0.5, 0.9, 1.0):
            lo = averaged_cross_section(frac * math.pi, BEAM, LASER,
                                        harmonic_max=4).value
            hi = averaged_cross_section(frac * math.pi, BEAM, LASER,
                                        harmonic_max=8).value
            assert hi == pytest.approx(lo, rel=1e-10)

    def test_forward_peaked(self):
        mid = averaged_cross_section(0.5 * math.pi, BEAM, LASER).value
        peak = averaged_cross_section(0.999 * math.pi, BEAM, LASER).value
        assert peak / mid >= 1e3

    def test_theta_out_of_range(self):
        with pytest.raises(DomainError):
            averaged_cross_section(3.5, BEAM, LASER)


class TestAngularSpectrum:
    def test_grid_and_monotone_tail(self):
        thetas = np.linspace(0.9 * math.pi, math.pi, 40)
        spectrum = angular_spectrum(BEAM, LASER, thetas)
        assert spectrum.averaged.shape == thetas.shape
        assert np.all(np.diff(spectrum.averaged) > 0.0)
        assert np.all(spectrum.averaged >= 0.0)

    def test_invalid_grid(self):
        with pytest.raises(DomainError):
            angular_spectrum(BEAM, LASER, np.array([[0.1]]))
        with pytest.raises(DomainError):
            angular_spectrum(BEAM, LASER, np.array([4.0]))


class TestKleinNishinaOracle:
    def test_rest_frame_thomson_limit(self):
        # soft photons recover the Thomson differential cross section
        alpha = 7.2973525693e-3
        for ct in (-1.0, 0.0, 0.7):
            got = klein_nishina_rest(1e-8, ct)
            want = 0.5 * alpha ** 2 * (1.0 + ct * ct)
            assert got == pytest.approx(want, rel=1e-6)

    def test_rest_frame_total_compton_backscatter(self):
        # k = 1 (m_e): check against the closed-form value of the
        # Klein-Nishina formula at 180 degrees
        alpha = 7.2973525693e-3
        k = 1.0
        kp = k / (1.0 + 2.0 * k)
        want = 0.5 * alpha ** 2 * (kp / k) ** 2 * (kp / k + k / kp)
        assert klein_nishina_rest(k, -1.0) == pytest.approx(want, rel=1e-12)

    def test_low_intensity_ratio_flat_in_theta(self):
        # at weak fields the averaged cross section is the Klein-Nishina
        # value per photon times the photon content of the Compton volume,
        # up to a constant normalization; the ratio must not depend on theta
        weak = LaserField(785.0, 1e16)
        n_gamma = weak.photon_density_compton()
        ratios = []
        for frac in (0.3, 0.6, 0.9, 0.999, 1.0):
            theta = frac * math.pi
            avg = averaged_cross_section(theta, BEAM, weak).value
            kn = klein_nishina_reference(theta, BEAM, weak.k)
            ratios.append(avg / (n_gamma * kn))
        ratios = np.array(ratios)
        assert np.ptp(ratios) / ratios.mean() < 0.02

    def test_ratio_stable_in_intensity(self):
        theta = 0.95 * math.pi
        vals = []
        for intensity in (1e17, 1e15):
            field = LaserField(785.0, intensity)
            avg = averaged_cross_section(theta, BEAM, field).value
            kn = klein_nishina_reference(theta, BEAM, field.k)
            vals.append(avg / (field.photon_density_compton() * kn))
        assert vals[0] == pytest.approx(vals[1], rel=0.02)
