"""Exception types shared across the library.

Every error raised on purpose derives from NetNewtonError so callers can
catch one base class at the CLI boundary and still branch on the precise
failure in tests.
"""


class NetNewtonError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------- topology

class DisconnectedGraph(NetNewtonError):
    """The communication graph does not connect all agents."""


class WeightOutOfRange(NetNewtonError):
    """A constructed mixing weight left its admissible interval."""


class NotSymmetric(NetNewtonError):
    """Weight matrix is not symmetric within tolerance."""


class NotRowStochastic(NetNewtonError):
    """Some row of the weight matrix does not sum to one."""


class NegativeEntry(NetNewtonError):
    """Weight matrix contains a negative entry."""


class DiagonalOutOfRange(NetNewtonError):
    """A diagonal weight is outside the open interval (0, 1)."""


class SparsityMismatch(NetNewtonError):
    """Sparsity pattern of the weight matrix disagrees with the edge set."""


# --------------------------------------------------------------- objective

class NonPositiveCurvature(NetNewtonError):
    """A local function violates its declared positive curvature floor."""


class DimensionMismatch(NetNewtonError):
    """An input vector or matrix has the wrong size for this problem."""


class EmptyInterval(NetNewtonError):
    """An audit interval has nonpositive length."""


# ------------------------------------------------------------------ agents

class MissingCacheEntry(NetNewtonError):
    """An agent was asked about a neighbor it has never heard from."""


class NotANeighbor(NetNewtonError):
    """A message arrived from an agent outside the recipient's neighborhood."""


# --------------------------------------------------- splitting / simulator

class StepsizeInadmissible(NetNewtonError):
    """The requested stepsize violates the active stepsize policy."""


class MaxIterationsExceeded(NetNewtonError):
    """An iterative solver ran out of its iteration budget."""


# ------------------------------------------------------------------ bounds

class InvalidConstants(NetNewtonError):
    """Problem constants violate the standing assumptions."""


class EpsilonTooLarge(NetNewtonError):
    """The stepsize is too large for the requested rate certificate."""


# ----------------------------------------------------------------- harness

class ConfigParse(NetNewtonError):
    """A config or data file could not be parsed or failed its schema."""
