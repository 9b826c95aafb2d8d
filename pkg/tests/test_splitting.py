"""Matrix splitting, truncated series inverse and reference solves."""

import numpy as np
import pytest

from netnewton import (
    MaxIterationsExceeded,
    PenalizedObjective,
    approx_inverse_apply,
    approx_inverse_dense,
    complete_graph,
    eval_grad,
    eval_hessian,
    laplacian_weights,
    newton_direction,
    normalized_B,
    path_graph,
    quadratic,
    rate_spectra,
    reference_solution,
    smoothed_huber,
    split,
    splitting_identity_residual,
)

from conftest import EPSILON


class TestSplit:
    def test_worked_instance_diagonal(self, worked_obj):
        sp = split(worked_obj, np.zeros(5))
        assert np.array_equal(sp.D, np.full(5, 3.0))

    def test_worked_instance_off_diagonal(self, worked_obj):
        sp = split(worked_obj, np.zeros(5))
        expected = np.full((5, 5), 0.125) + np.eye(5) * 0.375
        assert np.array_equal(sp.B, expected)

    def test_reconstruction_is_exact(self, worked_obj):
        x = np.arange(5.0)
        sp = split(worked_obj, x)
        H = eval_hessian(worked_obj, x)
        assert np.abs(H - (np.diag(sp.D) - sp.B)).max() == 0.0

    def test_diagonal_tracks_state_for_curved_locals(self):
        net = laplacian_weights(complete_graph(3), 0.2)
        locs = tuple(smoothed_huber(1.0, 0.0) for _ in range(3))
        obj = PenalizedObjective(net=net, locals=locs, alpha=1.0)
        near = split(obj, np.zeros(3))
        far = split(obj, np.full(3, 50.0))
        assert near.D.min() > far.D.max()


class TestApproxInverse:
    def test_two_forms_agree(self, worked_obj):
        sp = split(worked_obj, np.zeros(5))
        dense = approx_inverse_dense(sp)
        rng = np.random.default_rng(7)
        for _ in range(5):
            v = rng.normal(0, 1, 5)
            assert np.allclose(approx_inverse_apply(sp, v), dense @ v,
                               atol=1e-14)

    def test_worked_action_on_ones(self, worked_obj):
        # D = 3 I and B 1 = 1, so (D^-1 + D^-1 B D^-1) 1 = 4/9 1.
        sp = split(worked_obj, np.zeros(5))
        out = approx_inverse_apply(sp, np.ones(5))
        assert np.allclose(out, 4.0 / 9.0, atol=1e-15)

    def test_direction_equals_minus_inverse_times_gradient(self, worked_obj):
        sp = split(worked_obj, np.zeros(5))
        g = eval_grad(worked_obj, np.zeros(5))
        d = newton_direction(sp, g)
        assert np.allclose(d, -approx_inverse_dense(sp) @ g, atol=1e-13)

    def test_worked_first_direction(self, worked_obj):
        # Hand derived: agent 0 direction at the origin is 7/6.
        sp = split(worked_obj, np.zeros(5))
        g = eval_grad(worked_obj, np.zeros(5))
        d = newton_direction(sp, g)
        assert d[0] == pytest.approx(7.0 / 6.0, abs=1e-15)

    def test_truncation_error_shrinks_with_diagonal_dominance(self):
        # The dropped series tail scales like (D^-1 B)^2, so growing
        # alpha (hence D) must shrink the inversion error quadratically.
        net = laplacian_weights(path_graph(2), 0.4)
        locs = (quadratic(1.0, 0.0), quadratic(1.0, 0.0))
        x = np.zeros(2)

        def inversion_error(alpha):
            obj = PenalizedObjective(net=net, locals=locs, alpha=alpha)
            sp = split(obj, x)
            H = eval_hessian(obj, x)
            return np.abs(approx_inverse_dense(sp) @ H - np.eye(2)).max()

        assert inversion_error(100.0) < inversion_error(1.0) / 100


class TestIdentityResidual:
    def test_worked_residual_tiny(self, worked_obj):
        sp = split(worked_obj, np.zeros(5))
        H = eval_hessian(worked_obj, np.zeros(5))
        assert splitting_identity_residual(sp, H) <= 1e-12

    def test_residual_flags_wrong_inverse(self, worked_obj):
        sp = split(worked_obj, np.zeros(5))
        H = eval_hessian(worked_obj, np.zeros(5)) * 1.01
        assert splitting_identity_residual(sp, H) > 1e-3


class TestRateSpectra:
    def test_worked_values_exact(self, worked_obj):
        s = rate_spectra(worked_obj)
        assert s.rho == pytest.approx(1 / 3, abs=1e-15)
        assert s.lam_min == pytest.approx(1 / 3, abs=1e-15)
        assert s.lam_max == pytest.approx(4 / 9, abs=1e-15)

    def test_radius_bound_holds_measured(self, worked_obj):
        s = rate_spectra(worked_obj)
        sp = split(worked_obj, np.zeros(5))
        radius = np.abs(np.linalg.eigvalsh(normalized_B(sp))).max()
        assert radius <= s.rho + 1e-12

    def test_inverse_spectrum_inside_band(self, worked_obj):
        s = rate_spectra(worked_obj)
        sp = split(worked_obj, np.zeros(5))
        ev = np.linalg.eigvalsh(approx_inverse_dense(sp))
        assert ev.min() >= s.lam_min - 1e-12
        assert ev.max() <= s.lam_max + 1e-12


class TestReferenceSolution:
    def test_worked_optimum(self, worked_obj, worked_x_star, worked_F_star):
        ref = reference_solution(worked_obj)
        assert np.abs(ref.x_star - worked_x_star).max() <= 1e-12
        assert ref.F_star == pytest.approx(worked_F_star, abs=1e-12)
        assert ref.grad_norm <= 1e-12

    def test_quadratic_converges_in_one_step(self, worked_obj):
        ref = reference_solution(worked_obj)
        assert ref.iterations <= 2

    def test_curved_locals_converge(self):
        net = laplacian_weights(complete_graph(4), 0.2)
        locs = tuple(smoothed_huber(1.0, float(3 * i)) for i in range(4))
        obj = PenalizedObjective(net=net, locals=locs, alpha=2.0)
        ref = reference_solution(obj)
        assert ref.grad_norm <= 1e-12
        g = eval_grad(obj, ref.x_star)
        assert np.linalg.norm(g) <= 1e-12

    def test_iteration_cap_raises(self, worked_obj):
        with pytest.raises(MaxIterationsExceeded):
            reference_solution(worked_obj, tol=0.0, max_iterations=3)


def test_epsilon_fixture_matches_worked_instance():
    # The shared stepsize fixture is the one every worked oracle uses.
    assert EPSILON == 0.8
