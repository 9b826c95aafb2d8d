"""Asynchronous activation loop, traces and Monte Carlo aggregation.

One iteration activates a single uniformly chosen agent, runs its local
round (direction, step, refresh, primary broadcast), then the neighbor
reaction pass and the secondary rebroadcasts.  The simulator is the
only place randomness enters: the activation stream and the cosmetic
event clock draw from two separate PCG64 generators, so enabling the
clock never changes the dynamics.

Seeding scheme (documented implementation constant): trial k of a
Monte Carlo sweep uses seed = base_seed + k; within a trial the
activation stream is PCG64(SeedSequence((seed, 0))) and the clock
stream PCG64(SeedSequence((seed, 1))).  Identical seeds give bit
identical traces.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .agents import (
    AgentState,
    compute_direction,
    apply_step,
    init_agent,
    primary_broadcast,
    react_neighbor,
    refresh,
    store_secondary,
)
from .errors import StepsizeInadmissible
from .objective import PenalizedObjective, eval_F, eval_grad
from .splitting import RateSpectra, ReferenceSolution, rate_spectra, reference_solution

POLICIES = ("theorem1", "theorem2", "unchecked")

# Slack for inequality checks between float evaluations of exact
# mathematical statements.
DESCENT_SLACK = 1e-12


@dataclass(frozen=True, slots=True)
class TraceRow:
    """One recorded iteration.  active = -1 on the initial row."""

    t: int
    active: int
    F: float
    grad_norm: float
    rel_err: float
    weighted_err: float | None
    messages: int
    clock: float | None


@dataclass(eq=False)
class Trace:
    """Rows of one run plus the ground truth they are measured against."""

    rows: list[TraceRow]
    x_star: np.ndarray
    F_star: float
    epsilon: float
    seed: int
    stride: int
    policy: str

    def first_hit(self, threshold: float) -> int | None:
        """Earliest recorded t with |rel_err| <= threshold, None if never.

        The magnitude is what counts: a method that overshoots its
        optimum has not reached threshold accuracy while the signed
        error is still large and negative.
        """
        for r in self.rows:
            if abs(r.rel_err) <= threshold:
                return r.t
        return None

    @property
    def final(self) -> TraceRow:
        return self.rows[-1]


@dataclass(eq=False)
class World:
    """Mutable simulation state."""

    obj: PenalizedObjective
    agents: list[AgentState]
    epsilon: float
    policy: str
    seed: int
    rng: np.random.Generator
    clock_rng: np.random.Generator
    clock_enabled: bool
    react: bool
    x_star: np.ndarray
    F_star: float
    spectra: RateSpectra
    t: int = 0
    messages: int = 0
    clock: float = 0.0

    @property
    def n(self) -> int:
        return self.obj.n

    def x(self) -> np.ndarray:
        return np.fromiter((a.x for a in self.agents), float, self.n)


def check_stepsize(epsilon: float, spectra: RateSpectra, policy: str) -> None:
    """Enforce the configured stepsize policy.

    theorem1 admits 0 < epsilon <= eps_max = 2 (lam_min / lam_max)^2;
    theorem2 (the default) admits 0 < epsilon < min(1, eps_max), the
    window of the linear rate certificate; unchecked only requires a
    positive stepsize.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown stepsize policy {policy!r}")
    if not epsilon > 0.0:
        raise StepsizeInadmissible(f"epsilon must be positive, got {epsilon}")
    eps_max = 2.0 * (spectra.lam_min / spectra.lam_max) ** 2
    if policy == "theorem1" and epsilon > eps_max:
        raise StepsizeInadmissible(
            f"epsilon = {epsilon} exceeds eps_max = {eps_max:.6g}"
        )
    if policy == "theorem2" and not epsilon < min(1.0, eps_max):
        raise StepsizeInadmissible(
            f"epsilon = {epsilon} not inside (0, {min(1.0, eps_max):.6g}); "
            f"policy requires epsilon < min(1, eps_max), eps_max = {eps_max:.6g}"
        )


def make_world(obj: PenalizedObjective, epsilon: float, seed: int,
               policy: str = "theorem2", react: bool = True,
               clock: bool = False,
               reference: ReferenceSolution | None = None) -> World:
    """Initialize agents, streams and ground truth for one run.

    react=False suppresses the neighbor reaction pass and the secondary
    rebroadcasts after each activation.  That mode exists only to show
    the caches drifting from their owners; it is not the algorithm.
    """
    spectra = rate_spectra(obj)
    check_stepsize(epsilon, spectra, policy)
    if reference is None:
        reference = reference_solution(obj)
    agents = [init_agent(i, obj) for i in range(obj.n)]
    return World(
        obj=obj, agents=agents, epsilon=epsilon, policy=policy, seed=seed,
        rng=np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 0)))),
        clock_rng=np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 1)))),
        clock_enabled=clock, react=react,
        x_star=reference.x_star, F_star=reference.F_star, spectra=spectra,
    )


def _record(world: World, active: int, diag_prev: np.ndarray) -> TraceRow:
    x = world.x()
    F = eval_F(world.obj, x)
    gn = float(np.linalg.norm(eval_grad(world.obj, x)))
    rel = (F - world.F_star) / world.F_star if world.F_star != 0.0 else math.nan
    werr = float(np.linalg.norm(np.sqrt(diag_prev) * (x - world.x_star)))
    return TraceRow(
        t=world.t, active=active, F=float(F), grad_norm=gn, rel_err=float(rel),
        weighted_err=werr, messages=world.messages,
        clock=world.clock if world.clock_enabled else None,
    )


def initial_row(world: World) -> TraceRow:
    diag = np.fromiter((a.diag for a in world.agents), float, world.n)
    return _record(world, -1, diag)


def step(world: World) -> TraceRow:
    """Advance one iteration: activate, update, broadcast, react.

    Returns the trace row of the new state.  The weighted error column
    uses the splitting diagonal from before the update, matching the
    error metric of the quadratic phase analysis.
    """
    i = int(world.rng.integers(world.n))
    if world.clock_enabled:
        # Superposition of n unit rate Poisson clocks; cosmetic only.
        world.clock += float(world.clock_rng.exponential(1.0 / world.n))
    diag_prev = np.fromiter((a.diag for a in world.agents), float, world.n)
    world.t += 1
    a = world.agents[i]
    d = compute_direction(a)
    apply_step(a, world.epsilon, d, world.t)
    refresh(a)
    b = primary_broadcast(a)
    world.messages += len(a.w_nbr)
    if world.react:
        replies = []
        for j in a.w_nbr:
            replies.append(react_neighbor(world.agents[j], b))
        for reply in replies:
            sender = world.agents[reply.origin]
            world.messages += len(sender.w_nbr)
            for k in sender.w_nbr:
                store_secondary(world.agents[k], reply)
    return _record(world, i, diag_prev)


def run(obj: PenalizedObjective, epsilon: float, iterations: int, seed: int,
        policy: str = "theorem2", stride: int = 1, react: bool = True,
        clock: bool = False,
        reference: ReferenceSolution | None = None) -> Trace:
    """Simulate a full run and return its trace.

    Records the initial state, every stride-th iteration and the final
    iteration.  iterations = 0 gives a trace with only the initial row.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    world = make_world(obj, epsilon, seed, policy=policy, react=react,
                       clock=clock, reference=reference)
    rows = [initial_row(world)]
    for t in range(1, iterations + 1):
        row = step(world)
        if t % stride == 0 or t == iterations:
            rows.append(row)
    return Trace(rows=rows, x_star=world.x_star, F_star=world.F_star,
                 epsilon=epsilon, seed=seed, stride=stride, policy=policy)


# ------------------------------------------------------- descent check

@dataclass(frozen=True)
class DescentCheck:
    """Exhaustive one step expected descent test at the current state."""

    lhs: float        # exact expectation of F after one activation
    rhs: float        # certified upper bound
    grad_norm_sq: float
    ok: bool


def expected_descent_check(world: World) -> DescentCheck:
    """Compare E[F(next)] with its certificate at the current state.

    The expectation is exact: all n possible activations are enumerated
    with the directions the agents would actually take, and F is fully
    evaluated after each hypothetical step.  The bound is

        F(x) - (eps lam/n - eps^2 Lam^2 / (2 n lam)) ||grad F(x)||^2.
    """
    obj, eps, n = world.obj, world.epsilon, world.n
    x = world.x()
    F_now = eval_F(obj, x)
    total = 0.0
    for i in range(n):
        d = compute_direction(world.agents[i])
        x_try = x.copy()
        x_try[i] += eps * d
        total += eval_F(obj, x_try)
    lhs = total / n
    g = eval_grad(obj, x)
    gsq = float(g @ g)
    lam, Lam = world.spectra.lam_min, world.spectra.lam_max
    coeff = eps * lam / n - eps ** 2 * Lam ** 2 / (2.0 * n * lam)
    rhs = F_now - coeff * gsq
    return DescentCheck(lhs=float(lhs), rhs=float(rhs), grad_norm_sq=gsq,
                        ok=lhs <= rhs + DESCENT_SLACK)


# -------------------------------------------------------- Monte Carlo

@dataclass(eq=False)
class MonteCarloResult:
    """Per iteration sample statistics over independent trials.

    Arrays are aligned with t; the mean and standard deviation (ddof 1)
    are accumulated in trial order, so results do not depend on worker
    scheduling.
    """

    t: np.ndarray
    mean_F_gap: np.ndarray
    std_F_gap: np.ndarray
    mean_rel_err: np.ndarray
    std_rel_err: np.ndarray
    mean_weighted_err: np.ndarray
    std_weighted_err: np.ndarray
    final_rel_err: np.ndarray
    trials: int
    base_seed: int
    F_star: float


def _trial_arrays(args):
    (obj, epsilon, iterations, seed, policy, stride, react, clock,
     reference) = args
    tr = run(obj, epsilon, iterations, seed, policy=policy, stride=stride,
             react=react, clock=clock, reference=reference)
    t = np.array([r.t for r in tr.rows])
    gap = np.array([r.F - tr.F_star for r in tr.rows])
    rel = np.array([r.rel_err for r in tr.rows])
    werr = np.array([r.weighted_err for r in tr.rows])
    return t, gap, rel, werr


def monte_carlo(obj: PenalizedObjective, epsilon: float, iterations: int,
                trials: int, base_seed: int, policy: str = "theorem2",
                stride: int = 1, react: bool = True, clock: bool = False,
                workers: int = 1) -> MonteCarloResult:
    """Run independent trials with seeds base_seed + k and aggregate.

    workers > 1 distributes trials over processes; aggregation order is
    fixed by trial index either way, so the result is identical.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    reference = reference_solution(obj)
    jobs = [
        (obj, epsilon, iterations, base_seed + k, policy, stride, react,
         clock, reference)
        for k in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_arrays, jobs))
    else:
        results = [_trial_arrays(j) for j in jobs]
    t = results[0][0]
    gap = np.stack([r[1] for r in results])
    rel = np.stack([r[2] for r in results])
    werr = np.stack([r[3] for r in results])

    def _std(a):
        return a.std(axis=0, ddof=1) if trials > 1 else np.zeros(a.shape[1])

    return MonteCarloResult(
        t=t,
        mean_F_gap=gap.mean(axis=0), std_F_gap=_std(gap),
        mean_rel_err=rel.mean(axis=0), std_rel_err=_std(rel),
        mean_weighted_err=werr.mean(axis=0), std_weighted_err=_std(werr),
        final_rel_err=rel[:, -1].copy(),
        trials=trials, base_seed=base_seed, F_star=reference.F_star,
    )


# --------------------------------------------------------------- CSV

TRACE_HEADER = "t,active,F,grad_norm,rel_err,weighted_err,messages,clock"
AGGREGATE_HEADER = ("t,mean_F_gap,std_F_gap,mean_rel_err,std_rel_err,"
                    "mean_weighted_err,std_weighted_err")


def _fmt(v) -> str:
    # repr of a Python float is the shortest round trip form, which is
    # what makes traces byte stable across runs.
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def trace_csv_text(trace: Trace) -> str:
    lines = [TRACE_HEADER]
    for r in trace.rows:
        lines.append(",".join([
            str(r.t), str(r.active), _fmt(r.F), _fmt(r.grad_norm),
            _fmt(r.rel_err), _fmt(r.weighted_err), str(r.messages),
            _fmt(r.clock),
        ]))
    return "\n".join(lines) + "\n"


def write_trace_csv(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trace_csv_text(trace))


def aggregate_csv_text(mc: MonteCarloResult) -> str:
    lines = [AGGREGATE_HEADER]
    for k in range(len(mc.t)):
        lines.append(",".join([
            str(int(mc.t[k])),
            _fmt(mc.mean_F_gap[k]), _fmt(mc.std_F_gap[k]),
            _fmt(mc.mean_rel_err[k]), _fmt(mc.std_rel_err[k]),
            _fmt(mc.mean_weighted_err[k]), _fmt(mc.std_weighted_err[k]),
        ]))
    return "\n".join(lines) + "\n"


def write_aggregate_csv(mc: MonteCarloResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(aggregate_csv_text(mc))
