"""Hessian splitting and the truncated approximate inverse.

The objective Hessian H = I - W + alpha * diag(f_i'') splits as
H = D - B with

    D = alpha * diag(f_i'') + 2 (I - W_d)      (diagonal, positive),
    B = I - 2 W_d + W                          (constant in x),

where W_d carries the diagonal of W.  B keeps the sparsity of W, so a
truncated Neumann expansion of H^-1 = D^-1/2 (I - M)^-1 D^-1/2 with
M = D^-1/2 B D^-1/2 can be evaluated with neighbor communication only.
The first order truncation used throughout is

    Hhat^-1 = D^-1 + D^-1 B D^-1,

whose action on a gradient is exactly the two stage direction the
agents assemble locally: d0 = -D^-1 g, then d = D^-1 (B d0 - g).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MaxIterationsExceeded
from .objective import PenalizedObjective, eval_F, eval_grad, eval_hessian


@dataclass(frozen=True, eq=False)
class Splitting:
    """Splitting H = D - B at one point: D as a vector, B dense."""

    D: np.ndarray
    B: np.ndarray

    @property
    def n(self) -> int:
        return self.D.shape[0]


@dataclass(frozen=True)
class RateSpectra:
    """Closed form spectral constants of the splitting.

    rho bounds the spectrum of the normalized off diagonal part M;
    lam_min and lam_max bound the eigenvalues of Hhat^-1.
    """

    rho: float
    lam_min: float
    lam_max: float


@dataclass(frozen=True, eq=False)
class ReferenceSolution:
    """Centralized minimizer used as ground truth by the simulator."""

    x_star: np.ndarray
    F_star: float
    grad_norm: float
    iterations: int


def split(obj: PenalizedObjective, x: np.ndarray) -> Splitting:
    """Evaluate the splitting at x.

    Parameters
    ----------
    obj : PenalizedObjective
    x : ndarray
        Current iterate, one scalar per agent.

    Returns
    -------
    Splitting
        D as an n-vector of strictly positive diagonals, B dense with
        B_ii = 1 - W_ii and B_ij = W_ij on edges.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.n,):
        raise DimensionMismatch(f"x has shape {x.shape}, expected ({obj.n},)")
    W = obj.net.W
    d = np.diag(W)
    D = obj.alpha * np.array([f.hess(xi) for f, xi in zip(obj.locals, x)]) \
        + 2.0 * (1.0 - d)
    B = W.copy()
    B[np.diag_indices(obj.n)] = 1.0 - d
    return Splitting(D=D, B=B)


def normalized_B(sp: Splitting) -> np.ndarray:
    """Symmetric normalization M = D^-1/2 B D^-1/2, dense."""
    s = 1.0 / np.sqrt(sp.D)
    return sp.B * np.outer(s, s)


def approx_inverse_apply(sp: Splitting, v: np.ndarray) -> np.ndarray:
    """Apply Hhat^-1 = D^-1 + D^-1 B D^-1 to a vector.

    Matrix free in the inverse: only D-scalings and one product with B.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (sp.n,):
        raise DimensionMismatch(f"v has shape {v.shape}, expected ({sp.n},)")
    u = v / sp.D
    return u + (sp.B @ u) / sp.D


def approx_inverse_dense(sp: Splitting) -> np.ndarray:
    """Materialize Hhat^-1 for spectral diagnostics and oracles."""
    Dinv = np.diag(1.0 / sp.D)
    return Dinv + Dinv @ sp.B @ Dinv


def newton_direction(sp: Splitting, g: np.ndarray) -> np.ndarray:
    """Direction d = -Hhat^-1 g assembled the way the agents do.

    Computes d0 = -D^-1 g first, then d = D^-1 (B d0 - g), which is the
    same arithmetic each agent performs from its neighbors' d0 values.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (sp.n,):
        raise DimensionMismatch(f"g has shape {g.shape}, expected ({sp.n},)")
    d0 = -g / sp.D
    return (sp.B @ d0 - g) / sp.D


def splitting_identity_residual(sp: Splitting, H: np.ndarray) -> float:
    """Max abs residual of the exactness identity of the truncation.

    The first order truncation error obeys

        D^1/2 (I - Hhat^-1 H) = (D^-1/2 B D^-1/2)^2 D^1/2

    whenever H = D - B.  Returns max |lhs - rhs|, which is pure float
    noise for a consistent splitting and O(1) otherwise.
    """
    if H.shape != (sp.n, sp.n):
        raise DimensionMismatch(f"H has shape {H.shape}, expected square {sp.n}")
    sq = np.sqrt(sp.D)
    lhs = sq[:, None] * (np.eye(sp.n) - approx_inverse_dense(sp) @ H)
    M = normalized_B(sp)
    rhs = (M @ M) * sq[None, :]
    return float(np.abs(lhs - rhs).max())


def rate_spectra(obj: PenalizedObjective) -> RateSpectra:
    """Closed form rho, lam_min, lam_max from curvature and diagonals.

    rho < 1 certifies the Neumann expansion converges; lam_min and
    lam_max sandwich the eigenvalues of Hhat^-1 at every iterate.
    """
    a_m = obj.alpha * obj.hess_min
    a_M = obj.alpha * obj.hess_max
    two_delta = 2.0 * (1.0 - obj.net.diag_min)   # from the smallest W_ii
    two_Delta = 2.0 * (1.0 - obj.net.diag_max)   # from the largest W_ii
    rho = two_delta / (two_delta + a_m)
    lam_min = 1.0 / (two_delta + a_M)
    lam_max = (1.0 + rho) / (two_Delta + a_m)
    return RateSpectra(rho=rho, lam_min=lam_min, lam_max=lam_max)


def reference_solution(obj: PenalizedObjective, tol: float = 1e-12,
                       max_iterations: int = 200) -> ReferenceSolution:
    """Centralized minimizer of F by damped Newton with dense solves.

    Quadratic locals converge in one step; general locals take damped
    steps with halving until the value decreases.  Stops when the
    gradient norm falls below tol.

    Raises
    ------
    MaxIterationsExceeded
        If tol is not reached within max_iterations steps.
    """
    x = np.zeros(obj.n)
    for it in range(max_iterations):
        g = eval_grad(obj, x)
        gn = float(np.linalg.norm(g))
        if gn <= tol:
            return ReferenceSolution(x_star=x, F_star=eval_F(obj, x),
                                     grad_norm=gn, iterations=it)
        step = np.linalg.solve(eval_hessian(obj, x), -g)
        t = 1.0
        base = eval_F(obj, x)
        # Plain decrease backtracking; quadratics accept t = 1 at once.
        while t > 2.0 ** -40 and eval_F(obj, x + t * step) > base:
            t *= 0.5
        x = x + t * step
    raise MaxIterationsExceeded(
        f"reference solver: grad norm {gn:.3e} after {max_iterations} "
        f"iterations, tol {tol:.1e}"
    )
