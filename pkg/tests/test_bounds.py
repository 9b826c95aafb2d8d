"""Certificate constants: worked values, invariants, guard rails."""

import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest

from netnewton import (
    EpsilonTooLarge,
    InvalidConstants,
    ProblemConstants,
    compute_constants,
    constants_from_objective,
    eval_F,
    gamma_t,
    linear_envelope,
    theta_max,
    weighted_error_envelope,
)

from conftest import EPSILON


@pytest.fixture(scope="module")
def worked_pc(worked_obj, worked_ref):
    gap0 = eval_F(worked_obj, np.zeros(5)) - worked_ref.F_star
    return constants_from_objective(worked_obj, EPSILON, gap0)


@pytest.fixture(scope="module")
def worked_rc(worked_pc):
    return compute_constants(worked_pc)


class TestWorkedValues:
    """Frozen closed forms, re-derived with exact rational arithmetic."""

    def test_contraction_radius(self, worked_rc):
        assert worked_rc.rho == pytest.approx(float(Fraction(1, 3)), abs=1e-15)

    def test_inverse_spectrum_band(self, worked_rc):
        assert worked_rc.lam_min == pytest.approx(float(Fraction(1, 3)), abs=1e-15)
        assert worked_rc.lam_max == pytest.approx(float(Fraction(4, 9)), abs=1e-15)

    def test_admissible_stepsize_limit(self, worked_rc):
        assert worked_rc.eps_max == pytest.approx(1.125, abs=1e-15)

    def test_linear_rate(self, worked_rc):
        assert worked_rc.beta == pytest.approx(
            float(Fraction(624, 10125)), abs=1e-15)
        # Printable six figure value.
        assert worked_rc.beta == pytest.approx(0.061630, abs=1e-6)

    def test_gamma_two(self, worked_rc):
        assert worked_rc.gamma2 == pytest.approx(
            math.sqrt(8269 / 10125), abs=1e-15)

    def test_no_quadratic_phase_for_constant_hessians(self, worked_rc):
        assert worked_rc.gamma1 == 0.0
        assert worked_rc.c1 == 0.0
        assert worked_rc.c2 == 0.0
        assert worked_rc.t_quad_onset == math.inf
        assert "constant local Hessians" in worked_rc.t_quad_note


def _random_constants(rng):
    n = int(rng.integers(2, 40))
    alpha = float(rng.uniform(0.05, 3.0))
    m = float(rng.uniform(0.1, 2.0))
    M = m * float(rng.uniform(1.0, 4.0))
    lip = float(rng.uniform(0.0, 2.0))
    dmin = float(rng.uniform(0.05, 0.9))
    dmax = float(rng.uniform(dmin, 0.95))
    gap0 = float(rng.uniform(0.0, 100.0))
    probe = ProblemConstants(n=n, alpha=alpha, epsilon=1e-9, hess_min=m,
                             hess_max=M, hess_lip=lip, diag_min=dmin,
                             diag_max=dmax, gap0=gap0)
    eps_max = compute_constants(probe, strict=False).eps_max
    eps = float(rng.uniform(0.05, 0.95)) * min(1.0, eps_max)
    return ProblemConstants(n=n, alpha=alpha, epsilon=eps, hess_min=m,
                            hess_max=M, hess_lip=lip, diag_min=dmin,
                            diag_max=dmax, gap0=gap0)


class TestInvariants:
    def test_random_instances(self):
        rng = np.random.default_rng(77)
        for _ in range(300):
            pc = _random_constants(rng)
            rc = compute_constants(pc)
            assert 0.0 < rc.rho < 1.0
            assert 0.0 < rc.lam_min <= rc.lam_max
            assert rc.eps_max > 0.0
            assert 0.0 < rc.beta < 2.0 / pc.n
            assert 0.0 < rc.gamma2 < 1.0
            assert rc.c1 >= 0.0 and rc.c2 >= 0.0

    def test_gamma_t_decreases_to_gamma2(self):
        rng = np.random.default_rng(78)
        pc = _random_constants(rng)
        rc = compute_constants(pc)
        ts = np.array([2.0, 10.0, 100.0, 1000.0])
        vals = gamma_t(rc, ts)
        assert np.all(np.diff(vals) <= 0.0)
        assert vals[-1] >= rc.gamma2
        assert float(gamma_t(rc, 1e6)) == pytest.approx(rc.gamma2, rel=1e-9)


class TestGuards:
    def test_strict_rejects_epsilon_at_one(self, worked_pc):
        pc = dataclasses.replace(worked_pc, epsilon=1.0)
        with pytest.raises(EpsilonTooLarge) as exc:
            compute_constants(pc)
        assert "1.125" in str(exc.value)

    def test_nonstrict_allows_epsilon_one(self, worked_pc):
        pc = dataclasses.replace(worked_pc, epsilon=1.0)
        rc = compute_constants(pc, strict=False)
        assert rc.beta > 0.0

    def test_nonstrict_rejects_above_one(self, worked_pc):
        pc = dataclasses.replace(worked_pc, epsilon=1.2)
        with pytest.raises(EpsilonTooLarge):
            compute_constants(pc, strict=False)

    @pytest.mark.parametrize("patch", [
        {"n": 1},
        {"alpha": 0.0},
        {"hess_min": 0.0},
        {"hess_min": 3.0},          # above hess_max
        {"diag_min": 0.0},
        {"diag_max": 1.0},
        {"diag_min": 0.7, "diag_max": 0.6},
        {"gap0": -1.0},
    ])
    def test_invalid_constants_rejected(self, worked_pc, patch):
        with pytest.raises(InvalidConstants):
            dataclasses.replace(worked_pc, **patch)


class TestEnvelopes:
    def test_linear_envelope_starts_at_gap(self, worked_rc, worked_pc):
        env = linear_envelope(worked_rc, worked_pc, np.arange(4))
        assert env[0] == worked_pc.gap0
        assert np.all(np.diff(env) < 0.0)
        assert env[1] == pytest.approx((1 - worked_rc.beta) * worked_pc.gap0,
                                       rel=1e-15)

    def test_weighted_envelope_dominates_initial_error(
            self, worked_rc, worked_pc, worked_x_star):
        env0 = float(weighted_error_envelope(worked_rc, worked_pc, 0))
        measured0 = float(np.linalg.norm(np.sqrt(3.0) * worked_x_star))
        assert env0 >= measured0
        assert env0 == pytest.approx(math.sqrt(3.0 * worked_pc.gap0), rel=1e-12)

    def test_scalar_and_array_agree(self, worked_rc, worked_pc):
        arr = linear_envelope(worked_rc, worked_pc, np.array([7]))
        scalar = linear_envelope(worked_rc, worked_pc, 7)
        assert float(arr[0]) == float(scalar)


class TestThetaWindow:
    def test_infinite_for_constant_hessians(self, worked_rc):
        assert theta_max(worked_rc, 10) == math.inf

    def test_zero_when_strip_not_yet_contracting(self):
        # Large c2 keeps Gamma(t) above one at small t.
        pc = ProblemConstants(n=5, alpha=1.0, epsilon=0.3, hess_min=1.0,
                              hess_max=2.0, hess_lip=5.0, diag_min=0.4,
                              diag_max=0.5, gap0=1e6)
        rc = compute_constants(pc)
        assert float(gamma_t(rc, 2)) >= 1.0
        assert theta_max(rc, 2) == 0.0

    def test_finite_positive_late(self):
        pc = ProblemConstants(n=5, alpha=1.0, epsilon=0.3, hess_min=1.0,
                              hess_max=2.0, hess_lip=0.5, diag_min=0.4,
                              diag_max=0.5, gap0=10.0)
        rc = compute_constants(pc)
        late = theta_max(rc, 10_000)
        assert 0.0 < late < math.inf

    def test_curved_instance_has_finite_onset(self):
        pc = ProblemConstants(n=5, alpha=1.0, epsilon=0.3, hess_min=1.0,
                              hess_max=2.0, hess_lip=0.5, diag_min=0.4,
                              diag_max=0.5, gap0=10.0)
        rc = compute_constants(pc)
        assert math.isfinite(rc.t_quad_onset)
        assert rc.c2 > 0.0
