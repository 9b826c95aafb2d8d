"""The Hessian splitting and how good its two term inverse really is.

The solver never forms H^{-1}.  It splits H = D - B with block diagonal
D and off diagonal B, then uses the two leading terms of the Neumann
series as an approximate inverse.  The error of that truncation is what
the rate certificates are built around, and it shrinks fast as the
penalty strength alpha makes D more dominant.
"""

import numpy as np

from netnewton import (
    PenalizedObjective,
    approx_inverse_dense,
    complete_graph,
    eval_grad,
    eval_hessian,
    laplacian_weights,
    quadratic,
    rate_spectra,
    split,
    splitting_identity_residual,
)

net = laplacian_weights(complete_graph(5), 0.125)
locs = tuple(quadratic(1.0, float(i)) for i in range(1, 6))


def instance(alpha):
    return PenalizedObjective(net=net, locals=locs, alpha=alpha)


obj = instance(1.0)
x = np.zeros(5)
sp = split(obj, x)
print("D diagonal:", sp.D)
print("B:")
print(sp.B)
H = eval_hessian(obj, x)
print(f"identity residual of the truncation formula = "
      f"{splitting_identity_residual(sp, H):.3e}\n")

# The approximate Newton direction at the origin.
g = eval_grad(obj, x)
d = -approx_inverse_dense(sp) @ g
print("gradient at 0:", g)
print("direction at 0:", d, "\n")

print("alpha    |Hhat^-1 H - I|_max   spectral radius bound")
for alpha in (0.5, 1.0, 4.0, 16.0, 64.0):
    ob = instance(alpha)
    s = split(ob, x)
    err = np.abs(approx_inverse_dense(s) @ eval_hessian(ob, x) - np.eye(5)).max()
    rho = rate_spectra(ob).rho
    print(f"{alpha:6.1f}   {err:18.3e}   {rho:.6f}")
