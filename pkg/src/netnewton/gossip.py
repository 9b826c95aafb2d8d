"""Randomized gossip with local gradient steps, the comparison baseline.

One event picks an agent uniformly, then one of its neighbors uniformly;
the pair averages its coordinates and each of the two then takes a
plain gradient step on its own local function.  Progress is measured
against the consensus optimum of sum_i f_i (the problem this scheme
actually solves), not against the penalized objective of the Newton
solver; each method is judged on its own optimum.

With a fixed stepsize the pair process does not converge to a point:
no state is fixed under every possible pairing, so the error settles
at a gamma dependent noise floor.  Thresholds in qualitative tests
should sit above that floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MaxIterationsExceeded
from .objective import LocalFunction
from .simulator import Trace, TraceRow
from .topology import Graph

# Default stepsize for demos and comparisons.  A tuning constant, not a
# certified quantity; small enough that the noise floor sits well below
# the thresholds used in the comparison runs.
DEFAULT_GAMMA = 0.05


@dataclass(eq=False)
class GossipState:
    """Mutable state of one gossip run."""

    x: np.ndarray
    t: int
    messages: int
    clock: float
    rng: np.random.Generator
    clock_rng: np.random.Generator


def consensus_optimum(locals_: tuple[LocalFunction, ...], tol: float = 1e-12,
                      max_iterations: int = 200) -> tuple[float, float]:
    """Minimize phi(c) = sum_i f_i(c) by scalar Newton from c = 0.

    Returns (c_star, phi(c_star)).  Quadratic locals finish in one
    iteration; smooth strongly convex locals converge fast since phi
    inherits a positive curvature floor.
    """
    c = 0.0
    for _ in range(max_iterations):
        d1 = sum(f.grad(c) for f in locals_)
        if abs(d1) <= tol:
            return c, sum(f.value(c) for f in locals_)
        d2 = sum(f.hess(c) for f in locals_)
        c -= d1 / d2
    raise MaxIterationsExceeded(
        f"consensus optimum: |phi'| = {abs(d1):.3e} after {max_iterations} "
        f"iterations"
    )


def gossip_step(state: GossipState, graph: Graph,
                locals_: tuple[LocalFunction, ...], gamma: float) -> int:
    """One pairwise exchange; returns the initiating agent.

    Exactly two coordinates change: the pair averages, then each of the
    two takes a gradient step on its own local at the averaged point.
    Counts two messages per exchange.
    """
    i = int(state.rng.integers(graph.n))
    nbrs = graph.neighbors(i)
    j = nbrs[int(state.rng.integers(len(nbrs)))]
    avg = (state.x[i] + state.x[j]) / 2.0
    state.x[i] = avg - gamma * locals_[i].grad(avg)
    state.x[j] = avg - gamma * locals_[j].grad(avg)
    state.t += 1
    state.messages += 2
    return i


def gossip_run(locals_: tuple[LocalFunction, ...], graph: Graph, gamma: float,
               iterations: int, seed: int, stride: int = 1,
               clock: bool = False) -> Trace:
    """Simulate gossip and return a trace in the shared CSV schema.

    Same seeding scheme as the Newton simulator: activation stream
    PCG64(SeedSequence((seed, 0))), clock stream ((seed, 1)).  The
    weighted error column does not apply here and stays empty.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if len(locals_) != graph.n:
        raise ValueError(f"{len(locals_)} locals for {graph.n} agents")
    c_star, F_star = consensus_optimum(locals_)
    state = GossipState(
        x=np.zeros(graph.n), t=0, messages=0, clock=0.0,
        rng=np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 0)))),
        clock_rng=np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 1)))),
    )

    def record(active: int) -> TraceRow:
        F = float(sum(f.value(xi) for f, xi in zip(locals_, state.x)))
        g = np.array([f.grad(xi) for f, xi in zip(locals_, state.x)])
        rel = (F - F_star) / F_star if F_star != 0.0 else float("nan")
        return TraceRow(
            t=state.t, active=active, F=F,
            grad_norm=float(np.linalg.norm(g)), rel_err=float(rel),
            weighted_err=None, messages=state.messages,
            clock=state.clock if clock else None,
        )

    rows = [record(-1)]
    for t in range(1, iterations + 1):
        if clock:
            state.clock += float(state.clock_rng.exponential(1.0 / graph.n))
        i = gossip_step(state, graph, locals_, gamma)
        if t % stride == 0 or t == iterations:
            rows.append(record(i))
    return Trace(rows=rows, x_star=np.full(graph.n, c_star), F_star=F_star,
                 epsilon=gamma, seed=seed, stride=stride, policy="gossip")
