"""Tests for temporal channels, the channel decomposition, and certification."""

from __future__ import annotations

import numpy as np
import pytest
from conftest import (
    KET0,
    KET1,
    bell_state,
    octahedral_ensemble,
    proj,
    random_faithful_separable,
    random_trace_one_hermitian,
    rank_deficient_separable,
    werner,
)

import tempcert as tc

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

DIM_PAIRS = [(2, 2), (2, 3), (3, 3), (4, 4)]


class TestTemporalChannel:
    def test_product_state_gives_replace_channel(self):
        rng = np.random.default_rng(0)
        rho_a = tc.random_density(2, seed=rng)  # faithful w.p. 1
        rho_b = tc.random_density(3, seed=rng)
        e = tc.temporal_channel(tc.tensor(rho_a, rho_b), (2, 3), "a")
        np.testing.assert_allclose(e.choi, tc.replace_channel(rho_b, dim_in=2).choi, atol=1e-10)

    def test_non_faithful_product_measures_and_prepares(self):
        rng = np.random.default_rng(1)
        rho_b = tc.random_density(2, seed=rng)
        tau = tc.tensor(proj(KET0), rho_b)
        e = tc.temporal_channel(tau, (2, 2), "a")
        assert tc.is_cptp(e).ok
        np.testing.assert_allclose(tc.apply(e, proj(KET0)), rho_b, atol=1e-12)
        np.testing.assert_allclose(tc.apply(e, proj(KET1)), np.eye(2) / 2, atol=1e-12)
        np.testing.assert_allclose(tc.apply(e, np.outer(KET0, KET1.conj())), 0, atol=1e-12)
        rho_a = tc.partial_trace(tau, (2, 2), "b")
        assert tc.max_abs(tc.star_product(e, rho_a) - tau) < 1e-12

    def test_swap_half_gives_identity_channel(self):
        e = tc.temporal_channel(SWAP / 2, (2, 2), "a")
        np.testing.assert_allclose(e.choi, tc.identity_channel(2).choi, atol=1e-12)

    @pytest.mark.parametrize("dims", DIM_PAIRS)
    def test_reconstruction_on_hermitian_inputs(self, dims):
        rng = np.random.default_rng(sum(dims))
        for _ in range(5):
            tau = random_trace_one_hermitian(dims, rng)
            for side in ("a", "b"):
                e = tc.temporal_channel(tau, dims, side)
                assert tc.is_hptp(e)
                traced = "b" if side == "a" else "a"
                rho = tc.partial_trace(tau, dims, traced)
                if side == "a":
                    recon = tc.star_product(e, rho)
                else:
                    recon = tc.reverse_star(e, rho)
                assert tc.max_abs(recon - tau) < 1e-9

    def test_reconstruction_with_rank_deficient_marginal(self):
        rng = np.random.default_rng(2)
        ens = rank_deficient_separable((3, 2), rank_a=2, n_terms=3, rng=rng)
        tau = tc.assemble_state(ens)
        e = tc.temporal_channel(tau, (3, 2), "a")
        assert tc.is_cptp(e).ok
        rho_a = tc.partial_trace(tau, (3, 2), "b")
        assert tc.max_abs(tc.star_product(e, rho_a) - tau) < 1e-9

    @pytest.mark.parametrize("seed", range(3))
    def test_choi_matches_ensemble_structure(self, seed):
        # for separable tau the Choi matrix is the ensemble sum of
        # (cauchy (.) transposed first factors) tensor second factors,
        # everything expressed in an eigenbasis of the marginal
        rng = np.random.default_rng(seed)
        ens = random_faithful_separable((3, 2), rng)
        tau = tc.assemble_state(ens)
        rho_a = tc.partial_trace(tau, (3, 2), "b")
        p, u = np.linalg.eigh(rho_a)
        omega = tc.cauchy_matrix(p)
        expected = np.zeros((6, 6), dtype=complex)
        for w, sa, sb in zip(ens.weights, ens.states_a, ens.states_b):
            sa_eig = u.conj().T @ sa @ u
            factor = u.conj() @ tc.hadamard_product(omega, sa_eig.T) @ u.T
            expected += w * tc.tensor(factor, sb)
        e = tc.temporal_channel(tau, (3, 2), "a")
        assert tc.max_abs(e.choi - expected) < 1e-10

    def test_invalid_marginal_raises(self):
        bad = tc.tensor(np.diag([1.5, -0.5]).astype(complex), np.eye(2) / 2)
        with pytest.raises(ValueError, match="marginal on side a.*psd"):
            tc.temporal_channel(bad, (2, 2), "a")

    def test_non_unit_trace_raises(self):
        with pytest.raises(ValueError, match="trace"):
            tc.temporal_channel(np.eye(4) / 2, (2, 2), "a")


class TestSylvesterOracle:
    def test_product_state(self):
        rng = np.random.default_rng(3)
        rho = tc.random_density(2, seed=rng)
        sigma = tc.random_density(3, seed=rng)
        x = tc.sylvester_oracle(tc.tensor(rho, sigma), (2, 3), "a")
        np.testing.assert_allclose(x, tc.tensor(np.eye(2), sigma), atol=1e-10)

    def test_swap_half(self):
        np.testing.assert_allclose(tc.sylvester_oracle(SWAP / 2, (2, 2), "a"), SWAP, atol=1e-12)

    @pytest.mark.parametrize("dims", [(2, 2), (3, 2)])
    def test_agrees_with_eigenbasis_construction(self, dims):
        rng = np.random.default_rng(sum(dims) + 10)
        for _ in range(5):
            tau = random_trace_one_hermitian(dims, rng)
            for side in ("a", "b"):
                oracle = tc.sylvester_oracle(tau, dims, side)
                direct = tc.jamiolkowski(tc.temporal_channel(tau, dims, side))
                assert tc.max_abs(oracle - direct) < 1e-9

    def test_declines_non_faithful(self):
        tau = tc.tensor(proj(KET0), np.eye(2) / 2)
        with pytest.raises(ValueError, match="non-faithful"):
            tc.sylvester_oracle(tau, (2, 2), "a")


class TestDephasingChannel:
    def test_maximally_mixed_gives_identity(self):
        d = tc.dephasing_channel(np.eye(3) / 3)
        np.testing.assert_allclose(d.choi, tc.identity_channel(3).choi, atol=1e-12)

    def test_damping_factor(self):
        d = tc.dephasing_channel(np.diag([0.9, 0.1]))
        plus = np.full((2, 2), 0.5, dtype=complex)
        out = tc.apply(d, plus)
        assert abs(out[0, 1] - 0.3) < 1e-12  # 0.5 * 2 sqrt(0.09)
        assert abs(out[0, 0] - 0.5) < 1e-12

    def test_fixes_its_own_state(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            rho = tc.random_density(4, seed=rng)
            d = tc.dephasing_channel(rho)
            assert tc.is_cptp(d).ok
            np.testing.assert_allclose(tc.apply(d, rho), rho, atol=1e-11)

    def test_hadamard_schur_form_in_eigenbasis(self):
        rng = np.random.default_rng(5)
        p = np.array([0.5, 0.3, 0.2])
        u = tc.random_unitary(3, seed=rng)
        rho = u @ np.diag(p) @ u.conj().T
        d = tc.dephasing_channel(rho)
        h = tc.harmonic_mean_matrix(p)
        x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        lhs = tc.apply(d, u @ x @ u.conj().T)
        rhs = u @ tc.hadamard_product(h, x) @ u.conj().T
        assert tc.max_abs(lhs - rhs) < 1e-11

    def test_projector_form_is_basis_independent(self):
        # degenerate spectrum: any orthonormal basis of the eigenspace gives the same map
        rng = np.random.default_rng(6)
        p = np.array([0.4, 0.4, 0.2])
        rho = np.diag(p).astype(complex)
        d = tc.dephasing_channel(rho)
        theta = rng.uniform(0, 2 * np.pi)
        mix = np.eye(3, dtype=complex)
        mix[:2, :2] = [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        naive = np.zeros_like(d.choi)
        basis = [mix[:, i] for i in range(3)]
        for i, vi in enumerate(basis):
            for j, vj in enumerate(basis):
                h = 2 * np.sqrt(p[i] * p[j]) / (p[i] + p[j])
                ketbra_i, ketbra_j = proj(vi), proj(vj)
                v = np.outer(ketbra_i.T.ravel(), ketbra_j.T.ravel().conj())
                naive += h * v
        assert tc.max_abs(d.choi - naive) < 1e-12

    def test_rank_deficient_still_cptp(self):
        d = tc.dephasing_channel(np.diag([0.7, 0.3, 0.0]))
        assert tc.is_cptp(d).ok
        # kernel population is sent to the maximally mixed state
        out = tc.apply(d, np.diag([0.0, 0.0, 1.0]).astype(complex))
        np.testing.assert_allclose(out, np.eye(3) / 3, atol=1e-12)

    def test_iteration_converges_to_diagonal(self):
        rng = np.random.default_rng(7)
        spectrum = np.array([1.0, 0.4, 0.16, 0.064])
        spectrum /= spectrum.sum()
        u = tc.random_unitary(4, seed=rng)
        rho = u @ np.diag(spectrum) @ u.conj().T
        d = tc.dephasing_channel(rho)
        state = tc.random_density(4, seed=rng)
        previous = None
        for _ in range(200):
            state = tc.apply(d, state)
            off = u.conj().T @ state @ u
            off = off - np.diag(np.diag(off))
            norm = tc.max_abs(off)
            if previous is not None:
                assert norm <= previous + 1e-15
            previous = norm
        assert previous < 1e-8


class TestCorrelationMatrixCheck:
    def test_all_ones(self):
        valid, strict = tc.correlation_matrix_check(np.ones((3, 3)))
        assert valid and not strict

    def test_identity(self):
        valid, strict = tc.correlation_matrix_check(np.eye(3))
        assert valid and strict

    def test_harmonic_mean_matrices(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            p = rng.dirichlet(np.ones(5)) + 1e-6
            valid, _ = tc.correlation_matrix_check(tc.harmonic_mean_matrix(p))
            assert valid

    def test_non_unit_diagonal(self):
        valid, _ = tc.correlation_matrix_check(2 * np.eye(2))
        assert not valid


class TestPgm:
    def test_orthogonal_pure_ensemble(self):
        povm = tc.pgm([0.5, 0.5], [proj(KET0), proj(KET1)])
        assert len(povm) == 2
        np.testing.assert_allclose(povm[0], proj(KET0), atol=1e-12)
        np.testing.assert_allclose(povm[1], proj(KET1), atol=1e-12)

    def test_single_faithful_state(self):
        povm = tc.pgm([1.0], [np.eye(2) / 2])
        assert len(povm) == 1
        np.testing.assert_allclose(povm[0], np.eye(2), atol=1e-12)

    def test_rank_deficient_average_adjoins_kernel(self):
        povm = tc.pgm([1.0], [proj(KET0)])
        assert len(povm) == 2
        np.testing.assert_allclose(sum(povm), np.eye(2), atol=1e-12)

    def test_six_state_povm_resolves_identity(self):
        ens = octahedral_ensemble()
        povm = tc.pgm(ens.weights, list(ens.states_a))
        np.testing.assert_allclose(sum(povm), np.eye(2), atol=1e-10)
        for g in povm:
            assert tc.is_psd(g)[0]

    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError, match="probability"):
            tc.pgm([0.5, 0.4], [proj(KET0), proj(KET1)])
        with pytest.raises(ValueError, match="probability"):
            tc.pgm([1.5, -0.5], [proj(KET0), proj(KET1)])


class TestPgmMap:
    def test_product_state_gives_replace(self):
        rng = np.random.default_rng(9)
        rho_a = tc.random_density(2, seed=rng)
        rho_b = tc.random_density(3, seed=rng)
        g = tc.pgm_map(tc.tensor(rho_a, rho_b), (2, 3), "a")
        np.testing.assert_allclose(g.choi, tc.replace_channel(rho_b, dim_in=2).choi, atol=1e-10)

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_measure_and_prepare_form(self, seed):
        rng = np.random.default_rng(seed)
        ens = random_faithful_separable((2, 3), rng)
        tau = tc.assemble_state(ens)
        g = tc.pgm_map(tau, (2, 3), "a")
        povm = tc.pgm(ens.weights, list(ens.states_a))
        rng2 = np.random.default_rng(seed + 100)
        for _ in range(3):
            x = rng2.standard_normal((2, 2)) + 1j * rng2.standard_normal((2, 2))
            expected = sum(
                np.trace(gk @ x) * sb for gk, sb in zip(povm, ens.states_b)
            )
            assert tc.max_abs(tc.apply(g, x) - expected) < 1e-10

    def test_bell_state_trace_preserving_not_cp(self):
        g = tc.pgm_map(bell_state(), (2, 2), "a")
        report = tc.is_cptp(g)
        assert report.tp
        assert not report.cp

    def test_positive_on_states_even_when_not_cp(self):
        rng = np.random.default_rng(10)
        g = tc.pgm_map(bell_state(), (2, 2), "a")
        for _ in range(10):
            rho = tc.random_density(2, seed=rng)
            ok, _ = tc.is_psd(tc.apply(g, rho))
            assert ok


class TestVerifyDecomposition:
    def test_product_state(self):
        rng = np.random.default_rng(11)
        tau = tc.tensor(tc.random_density(2, seed=rng), tc.random_density(2, seed=rng))
        assert tc.verify_decomposition(tau, (2, 2), "a") < 1e-12

    @pytest.mark.parametrize("dims", [(2, 2), (3, 2)])
    def test_random_separable(self, dims):
        rng = np.random.default_rng(sum(dims) + 20)
        for _ in range(5):
            tau = tc.assemble_state(random_faithful_separable(dims, rng))
            for side in ("a", "b"):
                assert tc.verify_decomposition(tau, dims, side) < 1e-10

    def test_bell_state(self):
        # the stages are not CPTP here, yet the composite identity still holds
        assert tc.verify_decomposition(bell_state(), (2, 2), "a") < 1e-10

    def test_general_hermitian_faithful(self):
        rng = np.random.default_rng(12)
        tau = random_trace_one_hermitian((2, 2), rng)
        assert tc.verify_decomposition(tau, (2, 2), "a") < 1e-10


class TestCompatibility:
    def test_bell_state_incompatible_both_sides(self):
        for side in ("a", "b"):
            report = tc.compatibility_test(bell_state(), (2, 2), side)
            assert not report.compatible
            assert abs(report.test_min_eigenvalue + 1) < 1e-8
            assert report.cptp.choi_min_eigenvalue < 0
            assert not report.ppt

    @pytest.mark.parametrize("dims", [(2, 2), (3, 2)])
    def test_separable_states_compatible(self, dims):
        rng = np.random.default_rng(sum(dims) + 30)
        for _ in range(5):
            tau = tc.assemble_state(random_faithful_separable(dims, rng))
            for side in ("a", "b"):
                report = tc.compatibility_test(tau, dims, side)
                assert report.compatible
                assert report.cptp.ok
                assert report.reconstruction_residual < 1e-10

    def test_werner_family_threshold(self):
        for p, expected in [(0.2, True), (0.34, False), (0.9, False)]:
            report = tc.compatibility_test(werner(p), (2, 2), "a")
            assert report.compatible == expected
            # maximally mixed marginal: dephasing is trivial, test reduces to PPT
            assert abs(report.test_min_eigenvalue - (1 - 3 * p) / 2) < 1e-10

    def test_werner_boundary_flagged(self):
        report = tc.compatibility_test(werner(1 / 3), (2, 2), "a")
        assert report.boundary

    def test_spectrum_match_between_paths(self):
        rng = np.random.default_rng(13)
        for _ in range(5):
            tau = random_trace_one_hermitian((3, 2), rng)
            report = tc.compatibility_test(tau, (3, 2), "a")
            assert abs(report.test_min_eigenvalue - report.cptp.choi_min_eigenvalue) < 1e-9

    def test_rejects_invalid_marginal(self):
        with pytest.raises(ValueError, match="marginal"):
            tc.compatibility_test(tc.tensor(np.diag([1.5, -0.5]), np.eye(2) / 2), (2, 2), "a")


class TestIsPpt:
    def test_separable_is_ppt(self):
        rng = np.random.default_rng(14)
        tau = tc.assemble_state(tc.random_separable(2, 2, 4, seed=rng))
        ok, _ = tc.is_ppt(tau, (2, 2))
        assert ok

    def test_bell_state(self):
        ok, lam = tc.is_ppt(bell_state(), (2, 2))
        assert not ok
        assert abs(lam + 0.5) < 1e-12

    def test_werner_boundary(self):
        _, lam = tc.is_ppt(werner(1 / 3), (2, 2))
        assert abs(lam) < 1e-9


class TestCertify:
    def test_octahedral_state(self):
        tau = tc.assemble_state(octahedral_ensemble())
        result = tc.certify(tau, (2, 2))
        assert result.side_a.compatible and result.side_b.compatible and result.ppt
        assert result.compatible_both

    def test_bell_state(self):
        result = tc.certify(bell_state(), (2, 2))
        assert not result.side_a.compatible
        assert not result.side_b.compatible
        assert not result.ppt

    def test_non_faithful_product(self):
        tau = tc.tensor(proj(KET0), np.eye(2) / 2)
        result = tc.certify(tau, (2, 2))
        assert result.compatible_both and result.ppt
        assert not result.side_a.faithful_marginal
        assert result.side_b.faithful_marginal


class TestDistort:
    def test_matches_definition(self):
        rng = np.random.default_rng(15)
        tau = tc.assemble_state(random_faithful_separable((2, 3), rng))
        rho_a = tc.partial_trace(tau, (2, 3), "b")
        inv = tc.sqrt_pinv(rho_a).inv_sqrt
        ds = tc.distort(tau, (2, 3), "a")
        expected = tc.tensor(inv, np.eye(3)) @ tau @ tc.tensor(inv, np.eye(3))
        np.testing.assert_allclose(ds.distorted, expected, atol=1e-12)
        rho_b = tc.partial_trace(tau, (2, 3), "a")
        inv_b = tc.sqrt_pinv(rho_b).inv_sqrt
        ds_b = tc.distort(tau, (2, 3), "b")
        expected_b = tc.tensor(np.eye(2), inv_b) @ tau @ tc.tensor(np.eye(2), inv_b)
        np.testing.assert_allclose(ds_b.distorted, expected_b, atol=1e-12)

    def test_decohered_transpose_identity(self):
        # ((T o D) x id) applied to the distortion equals (D o Ad) applied to
        # the eigenbasis partial transpose
        rng = np.random.default_rng(16)
        tau = tc.assemble_state(random_faithful_separable((3, 2), rng))
        rho_a = tc.partial_trace(tau, (3, 2), "b")
        inv = tc.sqrt_pinv(rho_a).inv_sqrt
        _, u = np.linalg.eigh(rho_a)
        deph = tc.dephasing_channel(rho_a)
        conj = tc.tensor(inv, np.eye(2))
        lhs = tc.partial_transpose(
            tc.apply_to_factor(deph, conj @ tau @ conj, (3, 2), "a"), (3, 2), "a", basis=u
        )
        tau_pt = tc.partial_transpose(tau, (3, 2), "a", basis=u)
        rhs = tc.apply_to_factor(deph, conj @ tau_pt @ conj, (3, 2), "a")
        assert tc.max_abs(lhs - rhs) < 1e-10
