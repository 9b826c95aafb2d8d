"""Monte Carlo mean against the certified linear envelope.

The theory promises geometric decay of the expected weighted error with
factor sqrt(1 - beta) per event.  beta is tiny, so the envelope is
slack, but it is a hard ceiling: the trial mean must sit below it at
every recorded event.  200 trials keep the mean steady enough to see
the gap.
"""

import numpy as np

from netnewton import (
    PenalizedObjective,
    complete_graph,
    compute_constants,
    constants_from_objective,
    eval_F,
    laplacian_weights,
    monte_carlo,
    quadratic,
    reference_solution,
    weighted_error_envelope,
)

net = laplacian_weights(complete_graph(5), 0.125)
locs = tuple(quadratic(1.0, float(i)) for i in range(1, 6))
obj = PenalizedObjective(net=net, locals=locs, alpha=1.0)
eps = 0.8

ref = reference_solution(obj)
gap0 = eval_F(obj, np.zeros(5)) - ref.F_star
pc = constants_from_objective(obj, eps, gap0)
rc = compute_constants(pc)
print(f"beta = {rc.beta:.6f}, per event factor sqrt(1-beta) = "
      f"{np.sqrt(1 - rc.beta):.6f}\n")

mc = monte_carlo(obj, eps, iterations=800, trials=200, base_seed=0,
                 stride=100)
env = weighted_error_envelope(rc, pc, np.array(mc.t, dtype=float))

print("   t   mean weighted err      envelope        ratio")
for k, t in enumerate(mc.t.tolist()):
    m = mc.mean_weighted_err[k]
    print(f"{t:4d}   {m:16.6e}   {env[k]:12.6e}   {m / env[k]:9.2e}")

print("\nthe mean hugs a far steeper true rate; the envelope is the")
print("worst case certificate, not a prediction.")
