"""Tests for gf-Riesz / gf-orthonormal verdicts and the cross operator."""

import numpy as np
import pytest
from helpers import coordinate_system, scale_blocks

import gfusion as gf
from gfusion.errors import PreconditionFailed
from gfusion.linalg import adjoint, operator_norm
from gfusion.sampling import well_conditioned_matrix


class TestRieszBounds:
    def test_coordinate_system(self):
        rb = gf.riesz_bounds(coordinate_system((1.0, 1.0)))
        np.testing.assert_allclose([rb.lower, rb.upper], [1.0, 1.0], atol=1e-12)

    def test_duplicated_block_is_not_riesz(self):
        # Two copies of the same rank-1 subsystem on R^1: the synthesis map
        # has a kernel, so no lower Riesz bound exists (the frame verdict
        # still holds with bounds (2, 2)).
        sys = gf.make_system(
            1, "real", [(1.0, np.array([[1.0]]), np.array([[1.0]]))] * 2
        )
        assert gf.riesz_bounds(sys) is None
        fb = gf.frame_bounds(sys)
        np.testing.assert_allclose([fb.lower, fb.upper], [2.0, 2.0], atol=1e-12)

    def test_image_of_onb_under_invertible_map(self):
        # Transport a gf-orthonormal system by an invertible map M (the
        # subspaces move to M W_j); the Riesz bounds must be exactly the
        # extreme squared singular values of M.
        rng = np.random.default_rng(8)
        theta = gf.generate("onb", 8, 3, seed=14)
        m = well_conditioned_matrix(rng, 8, "real", 0.5, 2.0)
        comps = [
            (sub.weight, m @ sub.subspace.basis, adjoint(m @ sub.subspace.basis))
            for sub in theta.subsystems
        ]
        moved = gf.make_system(8, "real", comps)
        rb = gf.riesz_bounds(moved)
        sv = np.linalg.svd(m, compute_uv=False)
        assert abs(rb.lower - sv[-1] ** 2) <= 1e-9
        assert abs(rb.upper - sv[0] ** 2) <= 1e-9

    def test_riesz_implies_injective_and_complete(self):
        sys = gf.generate("riesz", 6, 3, seed=4)
        assert gf.riesz_bounds(sys) is not None
        assert gf.is_gf_complete(sys)
        t = gf.synthesis_matrix(sys)
        sv = np.linalg.svd(t, compute_uv=False)
        assert sv[-1] > 0 and t.shape[1] <= t.shape[0]


class TestGfOrthonormal:
    def test_coordinate_system_is_onb(self):
        verdict = gf.is_gf_orthonormal(coordinate_system((1.0, 1.0)))
        assert verdict.is_gf_orthonormal
        assert verdict.gram_deviation <= 1e-14
        assert verdict.parseval_deviation <= 1e-14

    def test_weights_break_orthonormality(self):
        verdict = gf.is_gf_orthonormal(coordinate_system((2.0, 1.0)))
        assert not verdict.is_gf_orthonormal
        # Gram block (0,0) is 4*I, hence deviation 3 from the identity.
        np.testing.assert_allclose(verdict.gram_deviation, 3.0, atol=1e-12)

    def test_partitioned_basis_satisfies_both_conditions(self):
        # A frame satisfying the Gram condition automatically satisfies the
        # Parseval condition: build one by partitioning a random orthonormal
        # basis of R^8 into coordinate blocks and check both deviations.
        sys = gf.generate("onb", 8, 3, seed=31)
        verdict = gf.is_gf_orthonormal(sys)
        assert verdict.gram_deviation <= 1e-12
        assert verdict.parseval_deviation <= 1e-12
        assert verdict.is_gf_orthonormal

    def test_onb_implies_riesz_and_parseval_with_unit_bounds(self):
        for seed in range(5):
            sys = gf.generate("onb", 7, 3, seed=seed)
            verdict = gf.is_gf_orthonormal(sys)
            assert verdict.is_riesz
            np.testing.assert_allclose(
                [verdict.riesz_bounds.lower, verdict.riesz_bounds.upper], [1.0, 1.0], atol=1e-9
            )
            fb = gf.frame_bounds(sys)
            np.testing.assert_allclose([fb.lower, fb.upper], [1.0, 1.0], atol=1e-9)

    def test_decomposition_report_on_onb(self):
        sys = gf.generate("onb", 9, 4, seed=3)
        rep = gf.decomposition_report(sys)
        assert rep.isometry_deviation <= 1e-9
        assert rep.image_overlap <= 1e-9
        assert sum(rep.image_dims) == 9
        assert rep.decomposes

    def test_decomposition_fails_for_weighted_system(self):
        rep = gf.decomposition_report(coordinate_system((2.0, 1.0)))
        assert not rep.decomposes

    def test_oversized_block_dimension_fails_verdict_without_error(self):
        # m_j > n makes the diagonal Gram block rank deficient; the verdict
        # is false, never an exception.
        op = np.vstack([np.eye(2), np.ones((2, 2))])  # 4 x 2
        sys = gf.make_system(2, "real", [(1.0, np.eye(2), op)])
        verdict = gf.is_gf_orthonormal(sys)
        assert not verdict.is_gf_orthonormal
        assert verdict.gram_deviation >= 1.0


class TestCrossOperator:
    def test_lambda_equals_theta_gives_identity(self):
        theta = gf.generate("onb", 6, 3, seed=9)
        rep = gf.cross_operator(theta, theta)
        assert operator_norm(rep.matrix - np.eye(6)) <= 1e-12
        assert rep.intertwine_residual <= 1e-12
        assert rep.surjective

    def test_scaled_lambda_scales_v(self):
        theta = gf.generate("onb", 6, 3, seed=9)
        lam = scale_blocks(theta, 2.0)
        rep = gf.cross_operator(theta, lam)
        assert operator_norm(rep.matrix - 2.0 * np.eye(6)) <= 1e-12

    @pytest.mark.parametrize("field", ["real", "complex"])
    def test_random_frame_intertwines(self, field):
        theta = gf.generate("onb", 8, 3, seed=77, field=field)
        lam = gf.generate_like(theta, "frame", seed=78)
        rep = gf.cross_operator(theta, lam)
        assert rep.intertwine_residual <= 1e-9
        assert rep.surjective
        assert rep.norm <= rep.bessel_norm_bound + 1e-9

    def test_classification_parseval(self):
        theta = gf.generate("onb", 8, 4, seed=1)
        lam = gf.generate_like(theta, "parseval", seed=2)
        rep = gf.classify_cross_operator(gf.cross_operator(theta, lam), lam)
        assert rep.adjoint_isometric

    def test_classification_riesz(self):
        theta = gf.generate("onb", 8, 4, seed=1)
        lam = gf.generate_like(theta, "riesz", seed=5)
        assert gf.riesz_bounds(lam) is not None
        rep = gf.classify_cross_operator(gf.cross_operator(theta, lam), lam)
        assert rep.invertible

    def test_classification_unitary_for_onb(self):
        theta = gf.generate("onb", 8, 4, seed=1)
        lam = gf.generate_like(theta, "onb", seed=6)
        rep = gf.classify_cross_operator(gf.cross_operator(theta, lam), lam)
        assert rep.unitary and rep.invertible and rep.surjective

    def test_rejects_non_orthonormal_theta(self):
        theta = coordinate_system((2.0, 1.0))
        lam = coordinate_system((2.0, 1.0))
        with pytest.raises(PreconditionFailed):
            gf.cross_operator(theta, lam)

    def test_rejects_mismatched_weights(self):
        theta = coordinate_system((1.0, 1.0))
        lam = coordinate_system((1.0, 2.0))
        with pytest.raises(PreconditionFailed):
            gf.cross_operator(theta, lam)

    def test_rejects_mismatched_subspaces(self):
        theta = gf.generate("onb", 6, 3, seed=9)
        rot = well_conditioned_matrix(np.random.default_rng(0), 6, "real", 1.0, 1.0)  # orthogonal
        comps = [
            (sub.weight, rot @ sub.subspace.basis, adjoint(rot @ sub.subspace.basis))
            for sub in theta.subsystems
        ]
        other = gf.make_system(6, "real", comps)
        with pytest.raises(PreconditionFailed):
            gf.cross_operator(theta, other)
