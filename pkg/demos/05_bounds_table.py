"""Every certificate constant for the worked five agent instance.

All of these come from closed forms in curvature and weight diagonal
bounds; nothing is estimated from trajectories.  The same table is
what the bounds subcommand prints.
"""

import numpy as np

from netnewton import (
    EpsilonTooLarge,
    PenalizedObjective,
    complete_graph,
    compute_constants,
    constants_from_objective,
    eval_F,
    laplacian_weights,
    quadratic,
    reference_solution,
)

net = laplacian_weights(complete_graph(5), 0.125)
locs = tuple(quadratic(1.0, float(i)) for i in range(1, 6))
obj = PenalizedObjective(net=net, locals=locs, alpha=1.0)

gap0 = eval_F(obj, np.zeros(5)) - reference_solution(obj).F_star
pc = constants_from_objective(obj, 0.8, gap0)
rc = compute_constants(pc)

print("problem constants")
for k in ("n", "alpha", "epsilon", "hess_min", "hess_max", "hess_lip",
          "diag_min", "diag_max", "gap0"):
    print(f"  {k:10s} {getattr(pc, k)!r}")

print("rate constants")
for k in ("rho", "lam_min", "lam_max", "eps_max", "beta", "gamma1",
          "gamma2", "c1", "c2", "t_quad_onset"):
    print(f"  {k:12s} {getattr(rc, k)!r}")
print(f"  note: {rc.t_quad_note}")

# Admissibility is part of the same closed form story: eps_max above
# is the hard ceiling, and 1.2 sits beyond it.
try:
    compute_constants(constants_from_objective(obj, 1.2, gap0))
except EpsilonTooLarge as exc:
    print(f"\nstepsize 1.2 refused: {exc}")
