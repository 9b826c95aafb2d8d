"""Closed form rate certificates for the asynchronous solver.

Everything here is arithmetic on a handful of problem constants: the
uniform curvature envelope of the locals, the extreme diagonal weights
of W, the penalty weight, the network size and the stepsize.  The
certificates cover the linear phase (contraction factor 1 - beta per
expected iteration) and the onset of the locally quadratic phase; both
are verified against simulation by the test suite, never fitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EpsilonTooLarge, InvalidConstants
from .objective import PenalizedObjective


@dataclass(frozen=True)
class ProblemConstants:
    """Scalar summary of one problem instance.

    hess_min, hess_max and hess_lip bound the local Hessians uniformly
    over agents; diag_min and diag_max are the extreme W_ii; gap0 is
    F(x(0)) - F* at the all zero start.
    """

    n: int
    alpha: float
    epsilon: float
    hess_min: float
    hess_max: float
    hess_lip: float
    diag_min: float
    diag_max: float
    gap0: float

    def __post_init__(self):
        ok = (
            self.n >= 2
            and self.alpha > 0.0
            and self.epsilon > 0.0
            and 0.0 < self.hess_min <= self.hess_max
            and self.hess_lip >= 0.0
            and 0.0 < self.diag_min <= self.diag_max < 1.0
            and self.gap0 >= 0.0
        )
        if not ok:
            raise InvalidConstants(f"constants violate standing assumptions: {self}")


@dataclass(frozen=True)
class RateConstants:
    """Derived certificate constants.

    t_quad_onset is the iteration count after which the quadratic phase
    strip applies; it is +inf for problems with constant local Hessians
    (hess_lip = 0, so c2 = 0 and there is no quadratic correction), and
    carries its raw formula value with a note when the onset condition
    is already met at t = 2.
    """

    rho: float
    lam_min: float
    lam_max: float
    eps_max: float
    beta: float
    gamma1: float
    gamma2: float
    c1: float
    c2: float
    t_quad_onset: float
    t_quad_note: str


def constants_from_objective(obj: PenalizedObjective, epsilon: float,
                             gap0: float) -> ProblemConstants:
    """Extract ProblemConstants from an objective.

    gap0 must be supplied by the caller (reference solve of F), keeping
    this module free of any dependence on solvers.
    """
    return ProblemConstants(
        n=obj.n,
        alpha=obj.alpha,
        epsilon=epsilon,
        hess_min=obj.hess_min,
        hess_max=obj.hess_max,
        hess_lip=obj.hess_lip,
        diag_min=obj.net.diag_min,
        diag_max=obj.net.diag_max,
        gap0=gap0,
    )


def compute_constants(pc: ProblemConstants, strict: bool = True) -> RateConstants:
    """Evaluate every certificate constant for one problem.

    Parameters
    ----------
    pc : ProblemConstants
    strict : bool
        When True (default), require epsilon < min(1, eps_max), the
        admissibility window of the linear rate certificate.  When
        False only epsilon <= 1 is required, which is what the
        gamma2 formula itself needs; beta may then leave (0, 1).

    Raises
    ------
    EpsilonTooLarge
        If epsilon violates the requested admissibility window.  The
        message reports eps_max so callers can surface the remedy.
    """
    a_m = pc.alpha * pc.hess_min
    a_M = pc.alpha * pc.hess_max
    two_delta = 2.0 * (1.0 - pc.diag_min)
    two_Delta = 2.0 * (1.0 - pc.diag_max)

    rho = two_delta / (two_delta + a_m)
    lam_min = 1.0 / (two_delta + a_M)
    lam_max = (1.0 + rho) / (two_Delta + a_m)
    eps_max = 2.0 * (lam_min / lam_max) ** 2

    if strict:
        limit = min(1.0, eps_max)
        if pc.epsilon >= limit:
            raise EpsilonTooLarge(
                f"epsilon = {pc.epsilon} but the linear certificate needs "
                f"epsilon < min(1, eps_max) = {limit:.6g} (eps_max = "
                f"{eps_max:.6g})"
            )
    elif pc.epsilon > 1.0:
        raise EpsilonTooLarge(
            f"epsilon = {pc.epsilon} > 1; the contraction formulas assume "
            "epsilon <= 1"
        )

    eps = pc.epsilon
    beta = a_m * eps * (2.0 * lam_min ** 2 - eps * lam_max ** 2) / (pc.n * lam_min)

    aL = pc.alpha * pc.hess_lip
    gamma1 = (pc.n * math.sqrt(two_delta + a_M) * aL * eps * lam_max
              / (2.0 * (two_Delta + a_m)))
    gamma2 = math.sqrt((pc.n - 1 + (1.0 - eps + eps * rho ** 2) ** 2) / pc.n)
    c1 = math.sqrt(eps * aL * lam_max / (two_Delta + a_m))
    c2 = c1 * (2.0 * pc.n ** 2 / lam_min * pc.gap0) ** 0.25

    if c2 == 0.0:
        t_quad_onset = math.inf
        note = "no quadratic correction: constant local Hessians (hess_lip = 0)"
    else:
        ratio = (1.0 - gamma2) / (c2 * gamma2)
        raw = 4.0 * math.log(ratio) / math.log1p(-beta) + 2.0
        if ratio >= 1.0:
            t_quad_onset = raw
            note = "onset condition already met at t = 2; raw formula value"
        else:
            t_quad_onset = raw
            note = "ok"
    return RateConstants(
        rho=rho, lam_min=lam_min, lam_max=lam_max, eps_max=eps_max, beta=beta,
        gamma1=gamma1, gamma2=gamma2, c1=c1, c2=c2,
        t_quad_onset=t_quad_onset, t_quad_note=note,
    )


def gamma_t(rc: RateConstants, t) -> float:
    """Quadratic phase coefficient Gamma(t) = gamma2 (1 + c2 (1-beta)^((t-2)/4))."""
    return rc.gamma2 * (1.0 + rc.c2 * np.power(1.0 - rc.beta, (np.asarray(t) - 2) / 4.0))


def linear_envelope(rc: RateConstants, pc: ProblemConstants, t):
    """Expected linear decay envelope (1 - beta)^t * gap0.

    Accepts scalar or array t and broadcasts.
    """
    return np.power(1.0 - rc.beta, np.asarray(t, dtype=float)) * pc.gap0


def weighted_error_envelope(rc: RateConstants, pc: ProblemConstants, t):
    """Envelope for E ||D^1/2 (x(t) - x*)||.

    Follows from the linear envelope through strong convexity:
    ||D^1/2 (x - x*)||^2 <= max_i D_ii * (2 / (alpha m)) (F(x) - F*),
    with max_i D_ii <= 2 (1 - diag_min) + alpha hess_max.
    """
    top = 2.0 * (1.0 - pc.diag_min) + pc.alpha * pc.hess_max
    scale = math.sqrt(2.0 * top / (pc.alpha * pc.hess_min) * pc.gap0)
    return scale * np.power(1.0 - rc.beta, np.asarray(t, dtype=float) / 2.0)


def theta_max(rc: RateConstants, t) -> float:
    """Upper end of the admissible window for the strip parameter theta.

    The quadratic phase statement holds for theta in
    (0, (1 - Gamma(t)) / (gamma1 Gamma(t))).  Returns +inf when
    gamma1 = 0 (degenerate, constant Hessians) and 0.0 when
    Gamma(t) >= 1, meaning the window is empty at this t.
    """
    g = float(gamma_t(rc, t))
    if g >= 1.0:
        return 0.0
    if rc.gamma1 == 0.0:
        return math.inf
    return (1.0 - g) / (rc.gamma1 * g)
