"""Per agent state and the local update protocol.

Each agent owns one scalar coordinate and keeps overwrite-on-receive
mailboxes with the latest x and d0 heard from each neighbor.  A full
round for an activated agent i runs

    1. assemble its direction from its own (diag, grad, d0) and the
       cached neighbor d0 values,
    2. step its coordinate,
    3. refresh diag, grad, d0 at the new point,
    4. broadcast (x, d0) to the neighborhood (primary message).

Every neighbor j then overwrites its cache entry for i, recomputes its
own grad and d0 (its coordinate and diag are untouched), and rebroadcasts
the new d0 to all of its neighbors, including i (secondary message).
Agents two hops from i only store that d0.  This reaction pass is what
keeps every cache equal to its owner's current value after each
iteration; the simulator can suppress it to demonstrate how the
directions degrade with stale caches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import MissingCacheEntry, NotANeighbor
from .objective import PenalizedObjective


@dataclass(frozen=True, slots=True)
class Broadcast:
    """One message.  Primary carries (x, d0); secondary carries d0 only."""

    origin: int
    primary: bool
    x: float | None
    d0: float


@dataclass(slots=True)
class AgentState:
    """Mutable per agent state plus cached problem constants.

    The mixing row (w_self, w_nbr) and the local function callables are
    stored at init so the hot loop never touches matrices; this mirrors
    what a deployed agent would hold in memory.
    """

    id: int
    x: float
    diag: float               # splitting diagonal at own x
    grad: float               # own penalized gradient component
    d0: float                 # zeroth order direction -grad / diag
    last_active: int
    alpha: float
    w_self: float
    w_nbr: dict[int, float]   # W_ij for each neighbor j
    f_value: Callable[[float], float]
    f_grad: Callable[[float], float]
    f_hess: Callable[[float], float]
    nbr_x: dict[int, float] = field(default_factory=dict)
    nbr_d0: dict[int, float] = field(default_factory=dict)


def init_agent(i: int, obj: PenalizedObjective) -> AgentState:
    """Agent state at the all zero start, caches primed by the init round.

    Every agent starts at x = 0 and knows its neighbors' initial x and
    d0; those inits are deterministic, so they are computed here instead
    of simulating the one-off exchange message by message.
    """
    W = obj.net.W
    f = obj.locals[i]
    w_self = float(W[i, i])
    nbrs = obj.net.graph.neighbors(i)
    x0 = 0.0
    diag = obj.alpha * f.hess(x0) + 2.0 * (1.0 - w_self)
    grad = (1.0 - w_self) * x0 + obj.alpha * f.grad(x0)
    s = AgentState(
        id=i, x=x0, diag=diag, grad=grad, d0=-grad / diag, last_active=-1,
        alpha=obj.alpha, w_self=w_self,
        w_nbr={j: float(W[i, j]) for j in nbrs},
        f_value=f.value, f_grad=f.grad, f_hess=f.hess,
    )
    for j in nbrs:
        fj = obj.locals[j]
        dj = obj.alpha * fj.hess(x0) + 2.0 * (1.0 - float(W[j, j]))
        gj = (1.0 - float(W[j, j])) * x0 + obj.alpha * fj.grad(x0)
        s.nbr_x[j] = x0
        s.nbr_d0[j] = -gj / dj
    return s


def compute_direction(s: AgentState) -> float:
    """Truncated Newton direction from own state and cached neighbor d0.

    d_i = (B_ii d0_i - g_i + sum_j B_ij d0_j) / D_ii with B_ii = 1 - W_ii
    and B_ij = W_ij.  Raises MissingCacheEntry if some neighbor has
    never been heard from.
    """
    acc = (1.0 - s.w_self) * s.d0 - s.grad
    for j, w in s.w_nbr.items():
        try:
            acc += w * s.nbr_d0[j]
        except KeyError:
            raise MissingCacheEntry(
                f"agent {s.id} has no cached d0 for neighbor {j}"
            ) from None
    return acc / s.diag


def apply_step(s: AgentState, epsilon: float, direction: float, t: int) -> None:
    """Move the owned coordinate by epsilon * direction at iteration t."""
    s.x += epsilon * direction
    s.last_active = t


def refresh(s: AgentState) -> None:
    """Recompute diag, grad and d0 at the current own coordinate.

    The gradient uses the cached neighbor coordinates; with coherent
    caches this equals the true gradient component at the global state.
    """
    s.diag = s.alpha * s.f_hess(s.x) + 2.0 * (1.0 - s.w_self)
    acc = (1.0 - s.w_self) * s.x + s.alpha * s.f_grad(s.x)
    for j, w in s.w_nbr.items():
        try:
            acc -= w * s.nbr_x[j]
        except KeyError:
            raise MissingCacheEntry(
                f"agent {s.id} has no cached x for neighbor {j}"
            ) from None
    s.grad = acc
    s.d0 = -s.grad / s.diag


def primary_broadcast(s: AgentState) -> Broadcast:
    """The (x, d0) message an activated agent sends after its refresh."""
    return Broadcast(origin=s.id, primary=True, x=s.x, d0=s.d0)


def react_neighbor(s: AgentState, b: Broadcast) -> Broadcast:
    """Absorb a primary broadcast and return the secondary reply.

    Overwrites the cache entries for the sender, recomputes grad and d0
    (own coordinate and diag are untouched by protocol), and returns
    the secondary broadcast carrying the fresh d0.

    Raises
    ------
    NotANeighbor
        If the sender is not adjacent to this agent.
    """
    if b.origin not in s.w_nbr:
        raise NotANeighbor(f"agent {s.id} got a message from {b.origin}")
    if not b.primary:
        raise ValueError("react_neighbor expects a primary broadcast")
    s.nbr_x[b.origin] = b.x
    s.nbr_d0[b.origin] = b.d0
    acc = (1.0 - s.w_self) * s.x + s.alpha * s.f_grad(s.x)
    for j, w in s.w_nbr.items():
        acc -= w * s.nbr_x[j]
    s.grad = acc
    s.d0 = -s.grad / s.diag
    return Broadcast(origin=s.id, primary=False, x=None, d0=s.d0)


def store_secondary(s: AgentState, b: Broadcast) -> None:
    """Absorb a secondary broadcast: overwrite the cached d0, nothing else."""
    if b.origin not in s.w_nbr:
        raise NotANeighbor(f"agent {s.id} got a message from {b.origin}")
    if b.primary:
        raise ValueError("store_secondary expects a secondary broadcast")
    s.nbr_d0[b.origin] = b.d0
