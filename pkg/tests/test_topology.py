"""Graphs, weight constructions and the weight matrix checks."""

import numpy as np
import pytest

from netnewton import (
    ConfigParse,
    DiagonalOutOfRange,
    DisconnectedGraph,
    Graph,
    NegativeEntry,
    NotRowStochastic,
    NotSymmetric,
    SparsityMismatch,
    WeightOutOfRange,
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


class TestGraph:
    def test_canonical_edge_order(self):
        g = Graph(3, ((2, 0), (1, 0)))
        assert g.edges == ((0, 1), (0, 2))
        assert g.neighbors(0) == (1, 2)
        assert g.neighbors(1) == (0,)

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self loop"):
            Graph(2, ((1, 1),))

    def test_rejects_duplicate_even_flipped(self):
        with pytest.raises(ValueError, match="duplicate"):
            Graph(2, ((0, 1), (1, 0)))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            Graph(2, ((0, 2),))

    def test_complete_graph_k5(self):
        g = complete_graph(5)
        assert len(g.edges) == 10
        assert g.max_degree == 4
        assert all(g.degree(i) == 4 for i in range(5))

    def test_path_and_cycle(self):
        p = path_graph(4)
        assert len(p.edges) == 3
        assert p.degree(0) == 1 and p.degree(1) == 2
        c = cycle_graph(4)
        assert len(c.edges) == 4
        assert all(c.degree(i) == 2 for i in range(4))

    def test_laplacian_matches_adjacency(self):
        g = path_graph(3)
        L = g.laplacian()
        assert np.array_equal(L, [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])

    def test_random_connected_is_connected(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            g = random_connected_graph(int(rng.integers(2, 20)), rng)
            # Laplacian second smallest eigenvalue > 0 iff connected.
            ev = np.linalg.eigvalsh(g.laplacian())
            assert ev[1] > 1e-10


class TestWeightConstructions:
    def test_laplacian_weights_k5(self):
        net = laplacian_weights(complete_graph(5), 0.125)
        assert net.diag_min == net.diag_max == 0.5
        expected = np.full((5, 5), 0.125) + np.eye(5) * 0.375
        assert np.array_equal(net.W, expected)

    def test_laplacian_weights_row_sums_exact(self):
        net = laplacian_weights(cycle_graph(7), 0.2)
        assert np.allclose(net.W.sum(axis=1), 1.0, atol=1e-12)

    def test_laplacian_rejects_nonpositive_kappa(self):
        with pytest.raises(WeightOutOfRange):
            laplacian_weights(path_graph(3), 0.0)

    def test_laplacian_rejects_degenerate_diagonal(self):
        # kappa * max_degree = 1 drives the hub weight to zero.
        with pytest.raises(WeightOutOfRange):
            laplacian_weights(path_graph(3), 0.5)

    def test_edgeless_graph_reports_disconnection(self):
        with pytest.raises(DisconnectedGraph):
            laplacian_weights(Graph(3, ()), 0.1)

    def test_metropolis_weights_path(self):
        net = metropolis_weights(path_graph(3))
        # Hub node 1 has degree 2: w_01 = 1/(1 + max(1, 2)) = 1/3.
        assert net.W[0, 1] == pytest.approx(1 / 3, abs=1e-15)
        assert np.allclose(net.W.sum(axis=1), 1.0, atol=1e-12)
        assert net.diag_min > 0

    def test_metropolis_diagonal_bounds_recorded(self):
        net = metropolis_weights(path_graph(4))
        assert net.diag_min == net.W.diagonal().min()
        assert net.diag_max == net.W.diagonal().max()


class TestValidate:
    def _k3(self):
        return complete_graph(3)

    def test_accepts_valid_matrix(self):
        W = np.full((3, 3), 1 / 4) + np.eye(3) / 4
        net = validate(W, self._k3())
        assert net.diag_min == 0.5

    def test_rejects_asymmetric(self):
        W = np.full((3, 3), 1 / 4) + np.eye(3) / 4
        W[0, 1] += 1e-6
        with pytest.raises(NotSymmetric):
            validate(W, self._k3())

    def test_rejects_bad_row_sum(self):
        W = np.full((3, 3), 1 / 4) + np.eye(3) / 4
        W[0, 0] += 1e-6
        with pytest.raises(NotRowStochastic):
            validate(W, self._k3())

    def test_rejects_negative_entry(self):
        W = np.array([[0.5, 0.75, -0.25],
                      [0.75, 0.5, -0.25],
                      [-0.25, -0.25, 1.5]])
        with pytest.raises(NegativeEntry):
            validate(W, self._k3())

    def test_rejects_zero_diagonal(self):
        # Row stochastic and symmetric, but w_ii = 0 breaks the
        # positive diagonal requirement the rate bounds rest on.
        W = np.array([[0.0, 0.5, 0.5],
                      [0.5, 0.0, 0.5],
                      [0.5, 0.5, 0.0]])
        with pytest.raises(DiagonalOutOfRange):
            validate(W, self._k3())

    def test_rejects_weight_on_missing_edge(self):
        g = path_graph(3)
        W = np.full((3, 3), 1 / 4) + np.eye(3) / 4
        with pytest.raises(SparsityMismatch):
            validate(W, g)

    def test_rejects_zero_weight_on_present_edge(self):
        g = self._k3()
        W = np.array([[0.5, 0.5, 0.0],
                      [0.5, 0.25, 0.25],
                      [0.0, 0.25, 0.75]])
        with pytest.raises(SparsityMismatch):
            validate(W, g)

    def test_rejects_unit_diagonal(self):
        g = self._k3()
        W = np.array([[0.5, 0.5, 0.0],
                      [0.5, 0.5, 0.0],
                      [0.0, 0.0, 1.0]])
        with pytest.raises(DiagonalOutOfRange):
            validate(W, g)

    def test_rejects_disconnected_weights(self):
        g = Graph(4, ((0, 1), (2, 3)))
        W = np.array([[0.5, 0.5, 0, 0],
                      [0.5, 0.5, 0, 0],
                      [0, 0, 0.5, 0.5],
                      [0, 0, 0.5, 0.5]])
        with pytest.raises(DisconnectedGraph):
            validate(W, g)


class TestFileReaders:
    def test_round_trip(self, tmp_path):
        edge = tmp_path / "g.txt"
        edge.write_text("# comment\n3 2\n0 1\n1 2\n")
        g = read_edge_list(edge)
        assert g.n == 3 and g.edges == ((0, 1), (1, 2))

    def test_header_count_mismatch(self, tmp_path):
        edge = tmp_path / "g.txt"
        edge.write_text("3 3\n0 1\n1 2\n")
        with pytest.raises(ConfigParse, match="promises 3"):
            read_edge_list(edge)

    def test_malformed_edge_line(self, tmp_path):
        edge = tmp_path / "g.txt"
        edge.write_text("2 1\n0 1 junk\n")
        with pytest.raises(ConfigParse):
            read_edge_list(edge)

    def test_weight_csv_reads_matrix(self, tmp_path):
        w = tmp_path / "w.csv"
        w.write_text("0.5,0.5\n0.5,0.5\n")
        W = read_weight_csv(w)
        assert W.shape == (2, 2)

    def test_network_from_files(self, tmp_path):
        edge = tmp_path / "g.txt"
        edge.write_text("2 1\n0 1\n")
        w = tmp_path / "w.csv"
        w.write_text("0.6,0.4\n0.4,0.6\n")
        net = network_from_files(edge, w)
        assert net.n == 2
        assert net.diag_min == pytest.approx(0.6)

    def test_network_from_files_rejects_bad_rows(self, tmp_path):
        edge = tmp_path / "g.txt"
        edge.write_text("2 1\n0 1\n")
        w = tmp_path / "w.csv"
        w.write_text("0.7,0.4\n0.4,0.6\n")
        with pytest.raises((NotRowStochastic, NotSymmetric)):
            network_from_files(edge, w)
