import math

import numpy as np
import pytest
from scipy.constants import hbar

from conftest import clear_of_resonance, random_params
from msinoise.errors import DegenerateFrequency
from msinoise.lumped_mode import from_exact, params_for_targets
from msinoise.radiation_pressure import (
    ForceNoiseSpectrum,
    force_transfer,
    noise_spectra,
    optical_damping,
    rigidity,
    rigidity_matrices,
    sideband_response,
)
from msinoise.scattering import (
    InterferometerParams,
    IntracavityField,
    PortVector,
    classical_fields,
)

Z = np.diag([1.0, -1.0])


def make_params(**overrides):
    base = dict(
        theta_m=0.3, epsilon=0.05, kappa=0.1, tau_s=1e-9, tau_w=1.1e-9,
        r_s=0.9, t_s=math.sqrt(0.19), r_w=0.0, t_w=1.0,
        k_p=2 * math.pi / 1.064e-6,
    )
    base.update(overrides)
    return InterferometerParams(**base)


class TestForceTransfer:
    def test_transparent_membrane_gives_zero(self):
        prm = make_params(theta_m=math.pi / 2)
        f = force_transfer(prm, 3e6)
        np.testing.assert_allclose(np.abs(f), 0.0, atol=1e-12)

    def test_dark_port_decoupling_in_michelson_limit(self):
        """Perfect mirror, balanced and unpumped-south: the west-port vacuum
        never reaches the force."""
        prm = make_params(theta_m=0.0, epsilon=0.0, kappa=0.0)
        field = classical_fields(prm, PortVector(west=1e8, south=0.0))
        assert field.e_minus == 0.0
        f = force_transfer(prm, 5e6)
        assert abs(f[0, 0]) < 1e-15
        row = field.as_array().conj() @ f
        assert abs(row[0]) < 1e-15 * abs(row[1])


class TestRigidityMatrices:
    def test_static_part_vanishes_for_perfect_mirror(self):
        _, k2, _ = rigidity_matrices(make_params(theta_m=0.0), 2e6)
        np.testing.assert_allclose(np.abs(k2), 0.0, atol=1e-12)

    def test_static_part_closed_form_at_45_degrees(self):
        _, k2, _ = rigidity_matrices(make_params(theta_m=math.pi / 4), 2e6)
        np.testing.assert_allclose(k2, -2.0 * Z, atol=1e-15)

    def test_dynamic_part_needs_a_cavity(self):
        prm = make_params(r_s=0.0, t_s=1.0)
        k1, _, _ = rigidity_matrices(prm, 2e6)
        np.testing.assert_allclose(np.abs(k1), 0.0, atol=1e-15)


class TestRigidity:
    def test_zero_field_gives_zero(self):
        bd = rigidity(make_params(), IntracavityField(0, 0), 3e6)
        assert bd.k == 0.0 and bd.k1 == 0.0 and bd.k2 == 0.0

    def test_scales_with_field_energy(self):
        prm = make_params()
        f1 = IntracavityField(2e8 * np.exp(0.7j), 1e8 * np.exp(-0.2j))
        lam = 1.7 * np.exp(0.4j)
        f2 = IntracavityField(lam * f1.e_plus, lam * f1.e_minus)
        k1 = rigidity(prm, f1, 3e6).k
        k2 = rigidity(prm, f2, 3e6).k
        assert abs(k2 - abs(lam) ** 2 * k1) <= 1e-14 * abs(k2)

    def test_canonical_spring_in_symmetric_regime(self):
        p = 0.01
        scale = (p / 0.02) ** 2
        prm = params_for_targets(gamma_s=2.5e6 * scale, delta_s=-2.0e6 * scale,
                                 theta_m=0.15 * math.pi, p=p, alpha=-0.5)
        lp = from_exact(prm)
        field = IntracavityField(3e8, 0.0)
        for big_omega in np.linspace(-4 * lp.gamma, 4 * lp.gamma, 9):
            if big_omega == 0.0:
                continue
            k = rigidity(prm, field, big_omega).k
            ell_pos = lp.gamma - 1j * (lp.delta + big_omega)
            ell_neg = lp.gamma - 1j * (lp.delta - big_omega)
            canonical = (4 * hbar * prm.k_p**2 * prm.r_m**2
                         * abs(field.e_plus) ** 2 * lp.delta
                         / (lp.tau_s * ell_pos * np.conj(ell_neg)))
            assert abs(k - canonical) <= 10 * p * abs(canonical)


class TestNoiseSpectra:
    def test_zero_field_zero_spectra(self):
        spec = noise_spectra(make_params(), IntracavityField(0, 0), [1e6, 3e6])
        np.testing.assert_array_equal(spec.s_tilde_pos, 0.0)
        np.testing.assert_array_equal(spec.s_tilde_neg, 0.0)
        np.testing.assert_array_equal(spec.h_opt, 0.0)

    def test_positivity_and_symmetrisation(self):
        rng = np.random.default_rng(21)
        checked = 0
        while checked < 30:
            prm = random_params(rng)
            big_omega = rng.uniform(1e5, 1e9)
            if not clear_of_resonance(prm, big_omega):
                continue
            field = IntracavityField(
                *(rng.normal(size=2) + 1j * rng.normal(size=2)) * 1e8
            )
            spec = noise_spectra(prm, field, [big_omega])
            assert spec.s_tilde_pos[0] >= 0.0 and spec.s_tilde_neg[0] >= 0.0
            assert spec.s_sym[0] == (spec.s_tilde_pos[0] + spec.s_tilde_neg[0]) / 2
            checked += 1

    def test_quadratic_scaling_in_field(self):
        prm = make_params()
        f1 = IntracavityField(2e8, 1e8j)
        f2 = IntracavityField(3.0 * f1.e_plus, 3.0 * f1.e_minus)
        s1 = noise_spectra(prm, f1, [4e6]).s_tilde_pos[0]
        s2 = noise_spectra(prm, f2, [4e6]).s_tilde_pos[0]
        assert abs(s2 - 9.0 * s1) <= 1e-14 * s2

    def test_singular_points_skipped_and_reported(self):
        # omega_p + Omega = 0 hits an exactly-unit round trip for r_s = 1
        prm = InterferometerParams(
            theta_m=0.0, epsilon=0.0, kappa=0.0, tau_s=1.0, tau_w=1.0,
            r_s=1.0, t_s=0.0, r_w=0.0, t_w=1.0, k_p=2 * math.pi,
        )
        field = IntracavityField(1e4, 0.0)
        grid = [1.0, -prm.omega_p, 0.0]
        spec = noise_spectra(prm, field, grid)
        assert len(spec.grid) == 1 and spec.grid[0] == 1.0
        assert len(spec.skipped) == 2
        reasons = " / ".join(reason for _, reason in spec.skipped)
        assert "singular" in reasons and "zero sideband" in reasons


class TestOpticalDamping:
    def test_symmetric_spectrum_no_damping(self):
        spec = ForceNoiseSpectrum(
            grid=np.array([1e6]), s_tilde_pos=np.array([3.0]),
            s_tilde_neg=np.array([3.0]), s_sym=np.array([3.0]),
            k=np.array([0.0j]), h_opt=np.array([0.0]),
        )
        assert optical_damping(spec)[0] == 0.0

    def test_zero_frequency_rejected(self):
        spec = ForceNoiseSpectrum(
            grid=np.array([0.0]), s_tilde_pos=np.array([1.0]),
            s_tilde_neg=np.array([0.5]), s_sym=np.array([0.75]),
            k=np.array([0.0j]), h_opt=np.array([0.0]),
        )
        with pytest.raises(DegenerateFrequency):
            optical_damping(spec)

    def test_red_detuned_damping_is_positive(self):
        prm = params_for_targets(gamma_s=2.5e6, delta_s=-6e6,
                                 theta_m=0.15 * math.pi, p=0.005, alpha=-0.5)
        field = classical_fields(prm, PortVector(west=1e8, south=0.0))
        lp = from_exact(prm)
        spec = noise_spectra(prm, field, [abs(lp.delta)])
        assert spec.h_opt[0] > 0.0

    def test_kubo_route_matches_rigidity_route(self, p1, p1_drive):
        field = classical_fields(p1, p1_drive)
        for big_omega in np.linspace(2 * math.pi * 1e5, 2 * math.pi * 2e6, 7):
            spec = noise_spectra(p1, field, [big_omega])
            lhs = big_omega * spec.h_opt[0]
            rhs = -spec.k[0].imag
            assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


def test_sideband_response_bundle(p1):
    resp = sideband_response(p1, 2 * math.pi * 3e5)
    assert resp.omega == p1.omega_p + resp.big_omega
    np.testing.assert_allclose(resp.g, resp.f.conj().T, rtol=1e-12)
    np.testing.assert_allclose(
        resp.r_ifo.conj().T @ resp.r_ifo, np.eye(2), atol=1e-10
    )
    assert abs(resp.d) > 0
