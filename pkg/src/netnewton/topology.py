"""Communication graphs and consensus weight matrices.

Agents sit on the nodes of an undirected connected graph and mix local
variables through a symmetric row stochastic weight matrix W whose
sparsity follows the edge set.  This module builds such matrices from a
graph (Laplacian based or Metropolis weights), validates arbitrary user
supplied ones, and reads the two on-disk formats: edge list text and
dense CSV.

Validation is spectral where it matters.  Connectivity is decided by the
second smallest eigenvalue of I - W rather than graph traversal, so a
matrix handed in without a trustworthy edge list is still checked
against the thing the algorithm actually needs: a one dimensional
consensus null space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigParse,
    DiagonalOutOfRange,
    DimensionMismatch,
    DisconnectedGraph,
    NegativeEntry,
    NotRowStochastic,
    NotSymmetric,
    SparsityMismatch,
    WeightOutOfRange,
)

# Tolerances for matrix validation.  Entries are O(1), so absolute
# comparisons are appropriate.
SYMMETRY_TOL = 1e-12
ROW_SUM_TOL = 1e-12
CONNECTIVITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on agents 0 .. n-1.

    Edges are stored canonically as (i, j) with i < j, sorted.  The
    constructor rejects self loops, duplicates and out of range ids.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    _nbrs: dict[int, tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        canon = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"self loop at node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            canon.append((min(i, j), max(i, j)))
        if len(set(canon)) != len(canon):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        nbrs: dict[int, list[int]] = {i: [] for i in range(self.n)}
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        object.__setattr__(
            self, "_nbrs", {i: tuple(sorted(v)) for i, v in nbrs.items()}
        )

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._nbrs[i]

    def degree(self, i: int) -> int:
        return len(self._nbrs[i])

    @property
    def max_degree(self) -> int:
        return max(self.degree(i) for i in range(self.n))

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def laplacian(self) -> np.ndarray:
        a = self.adjacency()
        return np.diag(a.sum(axis=1)) - a


@dataclass(frozen=True, eq=False)
class ConsensusNetwork:
    """A validated weight matrix together with its graph.

    diag_min and diag_max are the extreme diagonal weights.  They drive
    every spectral bound downstream, so they are computed once here and
    carried along.
    """

    W: np.ndarray
    graph: Graph
    diag_min: float
    diag_max: float

    @property
    def n(self) -> int:
        return self.graph.n


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)) + ((0, n - 1),))


def random_connected_graph(n: int, rng: np.random.Generator,
                           extra_edge_prob: float = 0.15) -> Graph:
    """Random tree by uniform attachment plus independent extra edges.

    Connectivity holds by construction, so no rejection loop is needed.
    """
    edges = set()
    for k in range(1, n):
        edges.add((int(rng.integers(k)), k))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < extra_edge_prob:
                edges.add((i, j))
    return Graph(n, tuple(edges))


def laplacian_weights(graph: Graph, kappa: float) -> ConsensusNetwork:
    """Build W = I - kappa * L from the graph Laplacian L.

    Parameters
    ----------
    graph : Graph
        Connected communication graph.
    kappa : float
        Laplacian scaling.  Must satisfy 0 < kappa < 1 / max degree so
        every diagonal weight stays inside (0, 1).

    Returns
    -------
    ConsensusNetwork

    Raises
    ------
    DisconnectedGraph
        If the graph is not connected.
    WeightOutOfRange
        If kappa is nonpositive or pushes some diagonal out of (0, 1).
    """
    if kappa <= 0:
        raise WeightOutOfRange(f"kappa must be positive, got {kappa}")
    W = np.eye(graph.n) - kappa * graph.laplacian()
    _check_connectivity(W)
    d = np.diag(W)
    if d.min() <= 0.0 or d.max() >= 1.0:
        raise WeightOutOfRange(
            f"diagonal weights in [{d.min():.6g}, {d.max():.6g}] leave (0, 1); "
            f"choose kappa below 1/{graph.max_degree} (1/max degree)"
        )
    return validate(W, graph)


def metropolis_weights(graph: Graph) -> ConsensusNetwork:
    """Build Metropolis weights W_ij = 1 / (1 + max(deg_i, deg_j)).

    The diagonal absorbs the remainder of each row, which lands in
    (0, 1) automatically on a connected graph with n >= 2.
    """
    n = graph.n
    W = np.zeros((n, n))
    for i, j in graph.edges:
        W[i, j] = W[j, i] = 1.0 / (1 + max(graph.degree(i), graph.degree(j)))
    np.fill_diagonal(W, 1.0 - W.sum(axis=1))
    _check_connectivity(W)
    return validate(W, graph)


def validate(W: np.ndarray, graph: Graph) -> ConsensusNetwork:
    """Check every consensus matrix property and return the network.

    Order of checks: shape, symmetry, nonnegativity, row sums, diagonal
    range, sparsity pattern, connectivity.  The first violated property
    raises its own error type; tolerances are absolute since all entries
    are O(1).

    Raises
    ------
    DimensionMismatch, NotSymmetric, NegativeEntry, NotRowStochastic,
    DiagonalOutOfRange, SparsityMismatch, DisconnectedGraph
    """
    W = np.asarray(W, dtype=float)
    n = graph.n
    if W.shape != (n, n):
        raise DimensionMismatch(f"expected {n}x{n} matrix, got {W.shape}")
    asym = np.abs(W - W.T).max() if n else 0.0
    if asym > SYMMETRY_TOL:
        raise NotSymmetric(f"max |W - W^T| = {asym:.3e} exceeds {SYMMETRY_TOL}")
    if W.min() < 0.0:
        i, j = np.unravel_index(np.argmin(W), W.shape)
        raise NegativeEntry(f"W[{i},{j}] = {W[i, j]:.6g} is negative")
    rs = np.abs(W.sum(axis=1) - 1.0)
    if rs.max() > ROW_SUM_TOL:
        i = int(np.argmax(rs))
        raise NotRowStochastic(
            f"row {i} sums to {W[i].sum():.15g}, off by {rs.max():.3e}"
        )
    d = np.diag(W)
    if d.min() <= 0.0 or d.max() >= 1.0:
        i = int(np.argmin(d) if d.min() <= 0.0 else np.argmax(d))
        raise DiagonalOutOfRange(
            f"W[{i},{i}] = {d[i]:.6g} is outside the open interval (0, 1)"
        )
    edge_set = set(graph.edges)
    for i in range(n):
        for j in range(i + 1, n):
            on_edge = (i, j) in edge_set
            if on_edge and W[i, j] == 0.0:
                raise SparsityMismatch(f"edge ({i}, {j}) carries zero weight")
            if not on_edge and W[i, j] != 0.0:
                raise SparsityMismatch(
                    f"W[{i},{j}] = {W[i, j]:.6g} but ({i}, {j}) is not an edge"
                )
    _check_connectivity(W)
    return ConsensusNetwork(W=W, graph=graph,
                            diag_min=float(d.min()), diag_max=float(d.max()))


def _check_connectivity(W: np.ndarray) -> None:
    # One eigenvalue of W at 1 is the consensus direction; a second
    # eigenvalue of I - W at numerical zero means a disconnected graph.
    n = W.shape[0]
    if n == 1:
        return
    ev = np.linalg.eigvalsh(np.eye(n) - (W + W.T) / 2.0)
    if ev[1] <= CONNECTIVITY_TOL:
        raise DisconnectedGraph(
            f"second smallest eigenvalue of I - W is {ev[1]:.3e}; "
            "the graph does not connect all agents"
        )


# ------------------------------------------------------------ file formats

def read_edge_list(path) -> Graph:
    """Read a graph from edge list text.

    The first data line is a header ``n <count>``; each following line
    is one ``i j`` pair with 0-based ids.  Blank lines and lines opening
    with ``#`` are skipped.
    """
    lines = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            s = raw.strip()
            if s and not s.startswith("#"):
                lines.append(s)
    if not lines:
        raise ConfigParse(f"{path}: empty edge list file")
    head = lines[0].split()
    if len(head) != 2:
        raise ConfigParse(f"{path}: header must be 'n <count>', got {lines[0]!r}")
    try:
        n, count = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ConfigParse(f"{path}: bad header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != count:
        raise ConfigParse(
            f"{path}: header promises {count} edges, file has {len(body)}"
        )
    edges = []
    for s in body:
        parts = s.split()
        if len(parts) != 2:
            raise ConfigParse(f"{path}: bad edge line {s!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ConfigParse(f"{path}: bad edge line {s!r}") from exc
    try:
        return Graph(n, tuple(edges))
    except ValueError as exc:
        raise ConfigParse(f"{path}: {exc}") from exc


def read_weight_csv(path) -> np.ndarray:
    """Read a dense weight matrix from CSV, one row per line."""
    try:
        W = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ConfigParse(f"{path}: {exc}") from exc
    return W


def network_from_files(edge_path, weight_path) -> ConsensusNetwork:
    """Read a graph and a weight matrix from disk and validate the pair."""
    return validate(read_weight_csv(weight_path), read_edge_list(edge_path))
