"""Asynchronous Newton methods for penalized consensus optimization.

A network of agents minimizes a penalized consensus objective

    F(x) = (1/2) x' (I - W) x + alpha * sum_i f_i(x_i)

by a randomized protocol: one agent wakes at a time, takes a damped
Newton step built from a two term series approximation of the inverse
Hessian, and broadcasts its update over two hops of the network.  The
package provides the weight matrix constructions and checks, the
matrix splitting and its spectral certificates, closed form convergence
rate constants, an event level simulator with per agent caches, a
randomized gossip baseline, deterministic CSV/SVG artifact emission and
an acceptance suite tying all of it together.

Everything is seeded and reproducible: same config and seed, same
bytes out.
"""

from .errors import (
    ConfigParse,
    DiagonalOutOfRange,
    DimensionMismatch,
    DisconnectedGraph,
    EmptyInterval,
    EpsilonTooLarge,
    InvalidConstants,
    MaxIterationsExceeded,
    MissingCacheEntry,
    NegativeEntry,
    NetNewtonError,
    NonPositiveCurvature,
    NotANeighbor,
    NotRowStochastic,
    NotSymmetric,
    SparsityMismatch,
    StepsizeInadmissible,
    WeightOutOfRange,
)
from .topology import (
    ConsensusNetwork,
    Graph,
    complete_graph,
    cycle_graph,
    laplacian_weights,
    metropolis_weights,
    network_from_files,
    path_graph,
    random_connected_graph,
    read_edge_list,
    read_weight_csv,
    validate,
)
from .objective import (
    LocalFunction,
    PenalizedObjective,
    audit_assumptions,
    eval_F,
    eval_grad,
    eval_hessian,
    quadratic,
    smoothed_huber,
)
from .splitting import (
    RateSpectra,
    ReferenceSolution,
    Splitting,
    approx_inverse_apply,
    approx_inverse_dense,
    newton_direction,
    normalized_B,
    rate_spectra,
    reference_solution,
    split,
    splitting_identity_residual,
)
from .bounds import (
    ProblemConstants,
    RateConstants,
    compute_constants,
    constants_from_objective,
    gamma_t,
    linear_envelope,
    theta_max,
    weighted_error_envelope,
)
from .simulator import (
    AGGREGATE_HEADER,
    TRACE_HEADER,
    DescentCheck,
    MonteCarloResult,
    Trace,
    TraceRow,
    World,
    aggregate_csv_text,
    check_stepsize,
    expected_descent_check,
    initial_row,
    make_world,
    monte_carlo,
    run,
    step,
    trace_csv_text,
    write_aggregate_csv,
    write_trace_csv,
)
from .gossip import (
    DEFAULT_GAMMA,
    GossipState,
    consensus_optimum,
    gossip_run,
    gossip_step,
)
from .config import (
    RunConfig,
    apply_overrides,
    build_network,
    build_objective,
    bundled_config_path,
    load_config,
)
from .svgplot import line_chart
from .acceptance import AcceptanceReport, CriterionResult, run_acceptance

__version__ = "0.1.0"

__all__ = [
    "AGGREGATE_HEADER",
    "AcceptanceReport",
    "ConfigParse",
    "ConsensusNetwork",
    "CriterionResult",
    "DEFAULT_GAMMA",
    "DescentCheck",
    "DiagonalOutOfRange",
    "DimensionMismatch",
    "DisconnectedGraph",
    "EmptyInterval",
    "EpsilonTooLarge",
    "GossipState",
    "Graph",
    "InvalidConstants",
    "LocalFunction",
    "MaxIterationsExceeded",
    "MissingCacheEntry",
    "MonteCarloResult",
    "NegativeEntry",
    "NetNewtonError",
    "NonPositiveCurvature",
    "NotANeighbor",
    "NotRowStochastic",
    "NotSymmetric",
    "PenalizedObjective",
    "ProblemConstants",
    "RateConstants",
    "RateSpectra",
    "ReferenceSolution",
    "RunConfig",
    "SparsityMismatch",
    "Splitting",
    "StepsizeInadmissible",
    "TRACE_HEADER",
    "Trace",
    "TraceRow",
    "WeightOutOfRange",
    "World",
    "__version__",
    "aggregate_csv_text",
    "apply_overrides",
    "approx_inverse_apply",
    "approx_inverse_dense",
    "audit_assumptions",
    "build_network",
    "build_objective",
    "bundled_config_path",
    "check_stepsize",
    "complete_graph",
    "compute_constants",
    "consensus_optimum",
    "constants_from_objective",
    "cycle_graph",
    "eval_F",
    "eval_grad",
    "eval_hessian",
    "expected_descent_check",
    "gamma_t",
    "gossip_run",
    "gossip_step",
    "initial_row",
    "laplacian_weights",
    "line_chart",
    "linear_envelope",
    "load_config",
    "make_world",
    "metropolis_weights",
    "monte_carlo",
    "network_from_files",
    "newton_direction",
    "normalized_B",
    "path_graph",
    "quadratic",
    "random_connected_graph",
    "rate_spectra",
    "read_edge_list",
    "read_weight_csv",
    "reference_solution",
    "run",
    "run_acceptance",
    "smoothed_huber",
    "split",
    "splitting_identity_residual",
    "step",
    "theta_max",
    "trace_csv_text",
    "validate",
    "weighted_error_envelope",
    "write_aggregate_csv",
    "write_trace_csv",
]
