"""Shared fixtures: the worked five agent instance and its ground truth.

Every closed form oracle below is derived by hand from the instance
definition (complete graph on five nodes, W = I - L/8, quadratic locals
pulling agent i toward i + 1, alpha = 1, stepsize 4/5) and frozen here;
the tests compare library output against these numbers, never the other
way around.
"""

from fractions import Fraction

import numpy as np
import pytest

from netnewton import (
    PenalizedObjective,
    complete_graph,
    laplacian_weights,
    quadratic,
    reference_solution,
)

EPSILON = 0.8


@pytest.fixture(scope="session")
def worked_obj() -> PenalizedObjective:
    net = laplacian_weights(complete_graph(5), 0.125)
    locs = tuple(quadratic(1.0, float(i)) for i in range(1, 6))
    return PenalizedObjective(net=net, locals=locs, alpha=1.0)


@pytest.fixture(scope="session")
def worked_ref(worked_obj):
    return reference_solution(worked_obj)


@pytest.fixture(scope="session")
def worked_x_star() -> np.ndarray:
    # Stationarity: row i of (I - W) x + 2 (x - b) = 0 with sum(x) = 15
    # reads (5 x_i - 15) / 8 + 2 x_i - 2 i = 0, so 21 x_i = 16 i + 15.
    return np.array([float(Fraction(16 * i + 15, 21)) for i in range(1, 6)])


@pytest.fixture(scope="session")
def worked_F_star() -> float:
    return float(Fraction(50, 21))
