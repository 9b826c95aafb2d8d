"""Penalized consensus objective built from scalar local functions.

Each agent i owns a private convex function f_i of one variable.  The
network problem minimized by the solver is

    F(x) = 0.5 * x^T (I - W) x + alpha * sum_i f_i(x_i),

whose first term penalizes disagreement across edges and whose second
term carries the local losses.  Local functions declare curvature
bounds (hess_min, hess_max) and a Hessian Lipschitz constant hess_lip;
everything downstream (splitting, stepsizes, rate certificates) is
computed from those declarations, so this module also ships an audit
that samples the declarations against the callables.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, EmptyInterval, NonPositiveCurvature
from .topology import ConsensusNetwork


@dataclass(frozen=True)
class LocalFunction:
    """Scalar convex function with declared curvature envelope.

    value, grad and hess are plain callables of one float.  hess_min
    must be strictly positive; the strong convexity of every rate
    certificate hangs on it, so a nonpositive declaration is rejected
    at construction time rather than detected mid-run.
    """

    value: Callable[[float], float]
    grad: Callable[[float], float]
    hess: Callable[[float], float]
    hess_min: float
    hess_max: float
    hess_lip: float
    name: str = "custom"

    def __post_init__(self):
        if self.hess_min <= 0.0:
            raise NonPositiveCurvature(
                f"{self.name}: declared curvature floor {self.hess_min} "
                "must be strictly positive"
            )
        if self.hess_max < self.hess_min:
            raise NonPositiveCurvature(
                f"{self.name}: hess_max {self.hess_max} below hess_min "
                f"{self.hess_min}"
            )
        if self.hess_lip < 0.0:
            raise NonPositiveCurvature(
                f"{self.name}: hess_lip {self.hess_lip} must be nonnegative"
            )


# Builders return picklable LocalFunctions (partials of module level
# functions), so Monte Carlo trials can cross process boundaries.

def _quad_value(a, b, x):
    return a * (x - b) ** 2


def _quad_grad(a, b, x):
    return 2.0 * a * (x - b)


def _quad_hess(a, b, x):
    return 2.0 * a


def quadratic(a: float, b: float) -> LocalFunction:
    """Quadratic local f(x) = a (x - b)^2 with curvature 2a.

    Parameters
    ----------
    a : float
        Curvature scale, strictly positive.
    b : float
        Minimizer of the local function.
    """
    if a <= 0.0:
        raise NonPositiveCurvature(f"quadratic needs a > 0, got a = {a}")
    return LocalFunction(
        value=functools.partial(_quad_value, a, b),
        grad=functools.partial(_quad_grad, a, b),
        hess=functools.partial(_quad_hess, a, b),
        hess_min=2.0 * a,
        hess_max=2.0 * a,
        hess_lip=0.0,
        name=f"quadratic(a={a}, b={b})",
    )


def _huber_value(scale, b, floor, x):
    r = x - b
    return scale ** 2 * (np.sqrt(1.0 + (r / scale) ** 2) - 1.0) + 0.5 * floor * r ** 2


def _huber_grad(scale, b, floor, x):
    r = x - b
    return r / np.sqrt(1.0 + (r / scale) ** 2) + floor * r


def _huber_hess(scale, b, floor, x):
    r = x - b
    return (1.0 + (r / scale) ** 2) ** -1.5 + floor


def smoothed_huber(scale: float, b: float, floor: float = 0.1) -> LocalFunction:
    """Smoothed Huber loss with a quadratic floor keeping curvature positive.

    f(x) = scale^2 (sqrt(1 + ((x-b)/scale)^2) - 1) + floor/2 (x-b)^2.

    The smooth part has curvature in (0, 1], vanishing at infinity, so
    the floor term supplies the strictly positive lower bound required
    by the solver.  The declared Lipschitz constant of the Hessian is
    the exact supremum of |f'''|, attained at (x-b)/scale = 1/2.
    """
    if scale <= 0.0:
        raise NonPositiveCurvature(f"huber needs scale > 0, got {scale}")
    if floor <= 0.0:
        raise NonPositiveCurvature(f"huber needs floor > 0, got {floor}")
    lip = 1.5 * (4.0 / 5.0) ** 2.5 / scale
    return LocalFunction(
        value=functools.partial(_huber_value, scale, b, floor),
        grad=functools.partial(_huber_grad, scale, b, floor),
        hess=functools.partial(_huber_hess, scale, b, floor),
        hess_min=floor,
        hess_max=floor + 1.0,
        hess_lip=lip,
        name=f"huber(scale={scale}, b={b}, floor={floor})",
    )


BUILDERS: dict[str, Callable[..., LocalFunction]] = {
    "quadratic": quadratic,
    "huber": smoothed_huber,
}


@dataclass(frozen=True, eq=False)
class PenalizedObjective:
    """Network objective: consensus penalty plus alpha-weighted locals."""

    net: ConsensusNetwork
    locals: tuple[LocalFunction, ...]
    alpha: float
    _pen: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.locals) != self.net.n:
            raise DimensionMismatch(
                f"{len(self.locals)} local functions for {self.net.n} agents"
            )
        if self.alpha <= 0.0:
            raise NonPositiveCurvature(f"alpha must be positive, got {self.alpha}")
        object.__setattr__(self, "locals", tuple(self.locals))
        # I - W is reused by every evaluation below.
        object.__setattr__(self, "_pen", np.eye(self.net.n) - self.net.W)

    @property
    def n(self) -> int:
        return self.net.n

    # Uniform curvature envelope over agents, used by every certificate.
    @property
    def hess_min(self) -> float:
        return min(f.hess_min for f in self.locals)

    @property
    def hess_max(self) -> float:
        return max(f.hess_max for f in self.locals)

    @property
    def hess_lip(self) -> float:
        return max(f.hess_lip for f in self.locals)


def _check_dim(obj: PenalizedObjective, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.n,):
        raise DimensionMismatch(f"x has shape {x.shape}, expected ({obj.n},)")
    return x


def eval_F(obj: PenalizedObjective, x: np.ndarray) -> float:
    """Objective value 0.5 x^T (I - W) x + alpha sum_i f_i(x_i)."""
    x = _check_dim(obj, x)
    pen = 0.5 * float(x @ (obj._pen @ x))
    return float(pen + obj.alpha * sum(f.value(xi) for f, xi in zip(obj.locals, x)))


def eval_grad(obj: PenalizedObjective, x: np.ndarray) -> np.ndarray:
    """Gradient (I - W) x + alpha * (f_i'(x_i))_i."""
    x = _check_dim(obj, x)
    g = obj._pen @ x
    g += obj.alpha * np.array([f.grad(xi) for f, xi in zip(obj.locals, x)])
    return g


def eval_hessian(obj: PenalizedObjective, x: np.ndarray) -> np.ndarray:
    """Hessian I - W + alpha * diag(f_i''(x_i)).  Dense, for oracles."""
    x = _check_dim(obj, x)
    H = obj._pen.copy()
    H[np.diag_indices(obj.n)] += obj.alpha * np.array(
        [f.hess(xi) for f, xi in zip(obj.locals, x)]
    )
    return H


# ------------------------------------------------------------------- audit

@dataclass(frozen=True)
class AuditViolation:
    agent: int
    kind: str          # "below_min" | "above_max" | "lipschitz"
    x: float
    measured: float
    declared: float


@dataclass(frozen=True)
class AuditReport:
    lo: float
    hi: float
    grid_points: int
    violations: tuple[AuditViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_assumptions(obj: PenalizedObjective, lo: float, hi: float,
                      grid_points: int = 201) -> AuditReport:
    """Sample each local Hessian on [lo, hi] against its declarations.

    Checks hess_min <= f''(x) <= hess_max at every grid point and the
    Lipschitz declaration on adjacent grid points.  Violations are
    recorded in the report, not raised; a wrong declaration is a user
    input problem the caller may want to inspect wholesale.

    Raises
    ------
    EmptyInterval
        If lo >= hi.
    """
    if not lo < hi:
        raise EmptyInterval(f"audit interval [{lo}, {hi}] has nonpositive length")
    xs = np.linspace(lo, hi, grid_points)
    # Slack for pure float noise in user callables; declared bounds are
    # supposed to hold mathematically, not just approximately.
    tol = 1e-9
    out = []
    for i, f in enumerate(obj.locals):
        h = np.array([f.hess(x) for x in xs])
        for x, hx in zip(xs, h):
            if hx < f.hess_min - tol:
                out.append(AuditViolation(i, "below_min", float(x), float(hx),
                                          f.hess_min))
            if hx > f.hess_max + tol:
                out.append(AuditViolation(i, "above_max", float(x), float(hx),
                                          f.hess_max))
        dx = xs[1] - xs[0]
        jump = np.abs(np.diff(h))
        for k in np.nonzero(jump > f.hess_lip * dx + tol)[0]:
            out.append(AuditViolation(i, "lipschitz", float(xs[k]),
                                      float(jump[k] / dx), f.hess_lip))
    return AuditReport(lo=lo, hi=hi, grid_points=grid_points,
                       violations=tuple(out))
