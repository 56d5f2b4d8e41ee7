import numpy as np
import pytest
from pytest import approx

from nvccd.drive import DriveConfig
from nvccd.errors import IntegrationError
from nvccd.hamiltonian import NVParams, hamiltonian_at
from nvccd.lindblad import (GELL_MANN_12, LindbladParams, collapse_operator,
                            lindblad_rhs, lindblad_rhs_matrix,
                            propagate_lindblad, rho_from_xi, validate_xi,
                            xi_from_rho)
from nvccd.qutrit import basis_state, density_from_state
from nvccd.unitary import propagate_unitary

from conftest import random_density


def fig2_params(gamma=0.0, order="first"):
    drive = DriveConfig(order=order, omega_plus=0.15, omega_minus=0.15,
                        amp1_plus=0.9, amp1_minus=0.9,
                        amp2_plus=0.45, amp2_minus=0.45)
    return LindbladParams(nv=NVParams(delta_plus=-1.0, drive=drive), gamma=gamma)


def random_drive_params(rng, gamma):
    a1p, a1m = rng.uniform(0.2, 1.2, size=2)
    a2p, a2m = a1p * rng.uniform(0.1, 0.9), a1m * rng.uniform(0.1, 0.9)
    drive = DriveConfig(order=int(rng.integers(0, 4)),
                        omega_plus=rng.uniform(0.1, 1.5),
                        omega_minus=rng.uniform(0.1, 1.5),
                        amp1_plus=a1p, amp1_minus=a1m,
                        amp2_plus=a2p, amp2_minus=a2m,
                        amp3_plus=a2p * rng.uniform(0.1, 0.9),
                        amp3_minus=a2m * rng.uniform(0.1, 0.9))
    return LindbladParams(nv=NVParams(delta_plus=rng.uniform(-1.5, 1.5), drive=drive),
                          gamma=gamma)


class TestXiLayout:
    def test_round_trip(self, rng):
        rho = random_density(rng)
        assert rho_from_xi(xi_from_rho(rho)) == approx(rho)

    def test_row_major_order(self):
        rho = np.arange(9).reshape(3, 3).astype(complex)
        xi = xi_from_rho(rho)
        assert xi[1] == rho[0, 1] and xi[3] == rho[1, 0] and xi[8] == rho[2, 2]

    def test_validate_xi(self, rng):
        validate_xi(xi_from_rho(random_density(rng)))
        bad = xi_from_rho(random_density(rng))
        bad[1] += 0.1
        with pytest.raises(ValueError, match="conjugates"):
            validate_xi(bad)


class TestRhsOracle:
    def test_component_matches_matrix_form(self, rng):
        # primary guard against transcription slips in the component equations
        for _ in range(1000):
            params = random_drive_params(rng, gamma=rng.uniform(0.0, 0.6))
            rho = random_density(rng)
            t = rng.uniform(0.0, 20.0)
            zeta = rng.normal(0.0, 0.2)
            zeta1 = rng.normal(0.0, 0.05)
            h = hamiltonian_at(params.nv, t, zeta=zeta, zeta1=zeta1)
            expected = lindblad_rhs_matrix(rho, h, params.gamma)
            got = rho_from_xi(lindblad_rhs(xi_from_rho(rho), params, t,
                                           zeta=zeta, zeta1=zeta1))
            assert np.abs(got - expected).max() < 1e-12

    def test_trace_conserved_identically(self, rng):
        # the nine derivatives sum to zero for arbitrary (even unphysical) input
        for _ in range(200):
            params = random_drive_params(rng, gamma=rng.uniform(0.0, 1.0))
            xi = rng.normal(size=9) + 1j * rng.normal(size=9)
            dxi = lindblad_rhs(xi, params, rng.uniform(0, 10))
            assert abs(dxi[0] + dxi[4] + dxi[8]) < 1e-12 * max(1.0, np.abs(xi).max())

    def test_hermiticity_preserved(self, rng):
        # conjugate-pair structure of the derivative for Hermitian input
        for _ in range(200):
            params = random_drive_params(rng, gamma=rng.uniform(0.0, 1.0))
            dxi = lindblad_rhs(xi_from_rho(random_density(rng)), params,
                               rng.uniform(0, 10), zeta=rng.normal())
            for a, b in ((1, 3), (2, 6), (5, 7)):
                assert abs(dxi[a] - dxi[b].conjugate()) < 1e-12


class TestRhsSpotValues:
    def test_maximally_mixed_is_fixed_point_without_drive(self):
        params = fig2_params(gamma=0.7, order="constant")
        params.nv.drive.constant_value = 0.0
        dxi = lindblad_rhs(xi_from_rho(np.eye(3, dtype=complex) / 3), params, 0.0)
        assert np.abs(dxi).max() < 1e-15

    def test_pure_commutator_at_gamma_zero(self):
        params = fig2_params(gamma=0.0)
        rho = density_from_state(basis_state(1))
        dxi = lindblad_rhs(xi_from_rho(rho), params, 0.0)
        assert dxi[0] == approx(0.0, abs=1e-15)
        assert dxi[1] == approx(0.45j, abs=1e-15)
        assert dxi[2] == approx(0.45j, abs=1e-15)

    def test_relaxation_rates_without_drive(self):
        params = fig2_params(gamma=0.05, order="constant")
        params.nv.drive.constant_value = 0.0
        dxi = lindblad_rhs(xi_from_rho(density_from_state(basis_state(1))), params, 0.0)
        assert dxi[0] == approx(-0.05)
        assert dxi[4] == approx(+0.05)
        others = np.delete(dxi, [0, 4])
        assert np.abs(others).max() < 1e-15

    def test_collapse_operator(self):
        L = collapse_operator(0.04)
        assert L == approx(0.2 * GELL_MANN_12)


class TestPropagation:
    def test_unitary_limit_preserves_purity(self):
        params = fig2_params(gamma=0.0, order="second")
        rho0 = density_from_state(basis_state(1))
        res = propagate_lindblad(params, rho0, t_max=20.0, dt=0.001)
        assert np.abs(res.purity - 1.0).max() < 1e-7

    def test_matches_pure_state_propagation_at_gamma_zero(self):
        params = fig2_params(gamma=0.0, order="first")
        rho0 = density_from_state(basis_state(1))
        lres = propagate_lindblad(params, rho0, t_max=20.0, dt=0.001)
        ures = propagate_unitary(params.nv, t_max=20.0, dt=0.001)
        projectors = np.einsum("ni,nj->nij", ures.states, ures.states.conj())
        assert np.abs(lres.rhos - projectors).max() < 1e-5

    def test_invariants_along_run(self):
        params = fig2_params(gamma=0.1, order="second")
        rho0 = density_from_state(basis_state(1))
        res = propagate_lindblad(params, rho0, t_max=30.0, dt=0.001)
        assert res.trace_drift.max() < 1e-8
        assert res.herm_residual.max() < 1e-8
        assert res.min_eigenvalue.min() > -1e-8

    def test_dissipation_diagonalizes_at_long_times(self):
        # undriven decay mixes levels 1-2 completely: coherences die,
        # purity -> 1/2 and entropy -> log3(2)
        params = fig2_params(gamma=0.2, order="constant")
        params.nv.drive.constant_value = 0.0
        rho0 = density_from_state((basis_state(1) + basis_state(2)) / np.sqrt(2))
        res = propagate_lindblad(params, rho0, t_max=60.0, dt=0.001)
        off_diag = res.rhos[-1] - np.diag(np.diagonal(res.rhos[-1]))
        assert np.abs(off_diag).max() < 1e-4
        assert res.purity[-1] == approx(0.5, abs=1e-3)
        assert res.entropy[-1] == approx(np.log(2) / np.log(3), abs=1e-3)

    def test_unstable_step_raises(self):
        params = fig2_params(gamma=0.5, order="first")
        rho0 = density_from_state(basis_state(1))
        with pytest.raises(IntegrationError, match="trace drift|positivity"):
            propagate_lindblad(params, rho0, t_max=400.0, dt=8.0, sample_every=1)

    def test_gamma_must_be_nonnegative(self):
        with pytest.raises(ValueError, match="gamma"):
            fig2_params(gamma=-0.1)
