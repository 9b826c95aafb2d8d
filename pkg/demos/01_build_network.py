"""Build a consensus network three ways and see the validator at work."""

import numpy as np

from netnewton import (
    NotRowStochastic,
    bundled_config_path,
    complete_graph,
    laplacian_weights,
    metropolis_weights,
    path_graph,
    read_edge_list,
    validate,
)

# Laplacian weights on the complete graph over five agents.  kappa is a
# mixing parameter: W = I - kappa * L, and kappa * max_degree < 1 keeps
# the diagonal positive.
net = laplacian_weights(complete_graph(5), 0.125)
print("K5, laplacian kappa=1/8:")
print(net.W)
print(f"diagonal range [{net.diag_min}, {net.diag_max}]\n")

# Metropolis weights need no tuning parameter: each edge weight is
# 1 / (1 + max(deg_i, deg_j)), the slack goes on the diagonal.
net = metropolis_weights(path_graph(4))
print("path on 4 agents, metropolis:")
print(net.W, "\n")

# Graphs can come from an edge list file; the package ships the K5
# fixture it uses in its own tests.
g = read_edge_list(bundled_config_path("k5_edges.txt"))
print(f"edge file: n={g.n}, {len(g.edges)} edges, max degree {g.max_degree}\n")

# validate() is the only door into ConsensusNetwork, so any W in the
# rest of the package has already passed every check.  A hand written
# matrix with a bad row sum is turned away:
W = np.array([[0.6, 0.3], [0.3, 0.7]])
try:
    validate(W, path_graph(2))
except NotRowStochastic as exc:
    print(f"rejected as expected: {exc}")
