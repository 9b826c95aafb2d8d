"""Head to head: asynchronous Newton against randomized gossip.

Each method is scored against the optimum of the problem it actually
solves.  Newton minimizes the penalized objective; gossip with local
gradient steps drifts around the consensus minimizer of the plain local
sum and never settles, because no single point is fixed under every
pairing.  The fair comparison is events to reach a fixed accuracy.
"""

import numpy as np

from netnewton import (
    PenalizedObjective,
    complete_graph,
    consensus_optimum,
    gossip_run,
    laplacian_weights,
    quadratic,
    run,
)

net = laplacian_weights(complete_graph(5), 0.125)
locs = tuple(quadratic(1.0, float(i)) for i in range(1, 6))
obj = PenalizedObjective(net=net, locals=locs, alpha=1.0)

c_star, F_c = consensus_optimum(locs)
print(f"gossip target: consensus minimizer c* = {c_star}, F_c* = {F_c}\n")

print("seed   newton t(1e-3)   gossip t(1e-3)   gossip floor")
newton_hits, gossip_hits, censored = [], [], 0
horizon = 5000
for seed in range(20):
    tn = run(obj, epsilon=0.8, iterations=1000, seed=seed)
    tg = gossip_run(locs, net.graph, gamma=0.05, iterations=horizon,
                    seed=seed)
    hn = tn.first_hit(1e-3)
    hg = tg.first_hit(1e-3)
    floor = np.median([abs(r.rel_err) for r in tg.rows[-1000:]])
    newton_hits.append(hn)
    if hg is None:
        censored += 1
        hg_text = f">= {horizon}"
    else:
        gossip_hits.append(hg)
        hg_text = str(hg)
    print(f"{seed:4d}   {hn:14d}   {hg_text:>14s}   {floor:12.3f}")

print(f"\nnewton: every run reached 1e-3, mean t = "
      f"{np.mean(newton_hits):.1f}")
print(f"gossip: {censored}/20 runs never reached 1e-3 within {horizon}; "
      f"the rest only grazed it while crossing their noise floor")
