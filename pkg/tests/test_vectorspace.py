"""Cosine/Pearson similarity, co-occurrence products, threshold graphs."""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from conftest import make_matrix, random_pruned_counts
from cowordmap.errors import ConfigError, CowordMapWarning, DataError
from cowordmap.vectorspace import (
    CoocMatrix,
    Edge,
    Graph,
    Node,
    cooccurrence,
    cosine_matrix,
    pearson_matrix,
    threshold_graph,
)


def cosine_oracle(data):
    """Pairwise cosine by explicit double loop."""
    k = data.shape[1]
    out = np.zeros((k, k))
    for a in range(k):
        for b in range(k):
            num = sum(data[i, a] * data[i, b] for i in range(data.shape[0]))
            na = math.sqrt(sum(data[i, a] ** 2 for i in range(data.shape[0])))
            nb = math.sqrt(sum(data[i, b] ** 2 for i in range(data.shape[0])))
            out[a, b] = num / (na * nb)
    return out


class TestCosine:
    def test_identical_columns(self):
        sim = cosine_matrix(np.array([[1.0, 2.0], [2.0, 4.0]]))
        assert sim.values[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_columns(self):
        sim = cosine_matrix(np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert sim.values[0, 1] == 0.0

    def test_matches_double_loop(self):
        rng = np.random.default_rng(2)
        data = rng.random((10, 15)) * 5
        sim = cosine_matrix(data)
        np.testing.assert_allclose(sim.values, cosine_oracle(data), atol=1e-12)

    def test_exactly_symmetric_unit_diagonal(self):
        rng = np.random.default_rng(4)
        data = rng.random((8, 12))
        sim = cosine_matrix(data)
        assert np.array_equal(sim.values, sim.values.T)
        assert (np.diag(sim.values) == 1.0).all()

    def test_zero_vector_is_fatal_and_names_label(self):
        data = np.array([[1.0, 0.0], [1.0, 0.0]])
        with pytest.raises(DataError, match="bad_term"):
            cosine_matrix(data, labels=["good", "bad_term"])

    def test_row_orientation(self):
        data = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])
        sim = cosine_matrix(data, orientation="rows")
        assert sim.values[0, 1] == pytest.approx(1.0, abs=1e-12)
        assert len(sim.labels) == 2

    def test_accepts_word_doc_matrix(self):
        m = make_matrix([[2, 1], [0, 1]])
        sim = cosine_matrix(m)
        assert sim.labels == ["t1", "t2"]

    def test_positive_column_has_positive_cosine_with_any_nonzero(self):
        # A term present in every document keeps a positive similarity with
        # every other surviving term, which is what parks it in the center
        # of a thresholded map.
        rng = np.random.default_rng(6)
        counts = random_pruned_counts(rng, 8, 10).astype(float)
        counts[:, 0] = rng.integers(1, 9, size=counts.shape[0])
        sim = cosine_matrix(counts)
        assert (sim.values[0, 1:] > 0).all()


class TestPearson:
    def test_affine_dependence(self):
        data = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
        assert pearson_matrix(data).values[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_anticorrelation(self):
        data = np.array([[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]])
        assert pearson_matrix(data).values[0, 1] == pytest.approx(-1.0, abs=1e-12)

    def test_equals_cosine_of_centered_data(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            data = rng.random((rng.integers(3, 30), 2)) * 10
            centered = data - data.mean(axis=0)
            if (np.linalg.norm(centered, axis=0) == 0).any():
                continue
            p = pearson_matrix(data).values[0, 1]
            c = cosine_matrix(centered).values[0, 1]
            assert abs(p - c) < 1e-12

    def test_constant_column_dropped_with_warning(self):
        data = np.array([[1.0, 5.0, 2.0], [2.0, 5.0, 1.0], [3.0, 5.0, 2.0]])
        with pytest.warns(CowordMapWarning, match="flat"):
            sim = pearson_matrix(data, labels=["a", "flat", "b"])
        assert sim.labels == ["a", "b"]
        assert sim.values.shape == (2, 2)

    def test_all_constant_is_fatal(self):
        data = np.full((4, 2), 3.0)
        with pytest.warns(CowordMapWarning):
            with pytest.raises(DataError):
                pearson_matrix(data)

    def test_shift_invariance_pearson_only(self):
        rng = np.random.default_rng(10)
        data = rng.random((12, 2)) + 0.5
        shifted = data.copy()
        shifted[:, 0] += 100.0
        p0 = pearson_matrix(data).values[0, 1]
        p1 = pearson_matrix(shifted).values[0, 1]
        assert abs(p0 - p1) < 1e-9
        c0 = cosine_matrix(data).values[0, 1]
        c1 = cosine_matrix(shifted).values[0, 1]
        assert abs(c0 - c1) > 1e-6

    def test_values_within_unit_interval(self):
        rng = np.random.default_rng(12)
        sim = pearson_matrix(rng.random((9, 7)))
        assert (sim.values >= -1).all() and (sim.values <= 1).all()


class TestCooccurrence:
    def test_hand_multiplication(self):
        m = make_matrix([[2, 1], [0, 1]])
        cooc = cooccurrence(m, mode="words")
        assert np.array_equal(cooc.values, [[4, 2], [2, 2]])
        assert cooc.labels == ["t1", "t2"]

    def test_binary_diagonal_is_docfreq(self):
        rng = np.random.default_rng(14)
        counts = (random_pruned_counts(rng, 8, 10) > 0).astype(int)
        m = make_matrix(counts)
        cooc = cooccurrence(m, mode="words")
        np.testing.assert_array_equal(np.diag(cooc.values), counts.sum(axis=0))

    def test_matches_triple_loop(self):
        rng = np.random.default_rng(16)
        counts = random_pruned_counts(rng, 10, 15)
        m = make_matrix(counts)
        for mode, expected_shape in (("words", counts.shape[1]), ("documents", counts.shape[0])):
            cooc = cooccurrence(m, mode=mode)
            a = counts.T if mode == "words" else counts
            n = a.shape[0]
            manual = np.zeros((n, n), dtype=np.int64)
            for x in range(n):
                for y in range(n):
                    for z in range(a.shape[1]):
                        manual[x, y] += a[x, z] * a[y, z]
            assert cooc.values.shape == (expected_shape, expected_shape)
            assert np.array_equal(cooc.values, manual)
            assert np.array_equal(cooc.values, cooc.values.T)

    def test_words_equals_documents_of_transposed(self):
        rng = np.random.default_rng(18)
        counts = random_pruned_counts(rng, 6, 9)
        words = cooccurrence(make_matrix(counts), mode="words")
        flipped = cooccurrence(make_matrix(counts.T), mode="documents")
        assert np.array_equal(words.values, flipped.values.T)

    def test_unknown_mode(self):
        with pytest.raises(ConfigError):
            cooccurrence(make_matrix([[1]]), mode="phrases")


class TestThresholdGraph:
    def sim(self, values, labels):
        return CoocMatrix(values=np.array(values), labels=labels, mode="words")

    def test_geq_keeps_boundary(self):
        matrix = self.sim([[9, 1], [1, 9]], ["a", "b"])
        g = threshold_graph(matrix, 1.0, rule="geq")
        assert len(g.edges) == 1 and g.edges[0].weight == 1.0

    def test_gt_drops_boundary(self):
        matrix = self.sim([[9, 1], [1, 9]], ["a", "b"])
        with pytest.warns(CowordMapWarning, match="no edges"):
            g = threshold_graph(matrix, 1.0, rule="gt")
        assert g.edges == []
        assert [n.label for n in g.nodes] == ["a", "b"]  # isolates retained

    def test_zero_offdiagonal_no_edges(self):
        matrix = self.sim(np.diag([3, 3, 3]), ["a", "b", "c"])
        with pytest.warns(CowordMapWarning):
            g = threshold_graph(matrix, 0.5, rule="geq")
        assert len(g.nodes) == 3 and not g.edges

    def test_edge_count_monotone_in_threshold(self):
        rng = np.random.default_rng(20)
        values = rng.random((8, 8))
        values = (values + values.T) / 2
        matrix = self.sim(values, [f"n{i}" for i in range(8)])
        counts = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CowordMapWarning)
            for threshold in np.linspace(0, 1.2, 13):
                g = threshold_graph(matrix, float(threshold), rule="geq")
                counts.append(len(g.edges))
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_requires_symmetry(self):
        matrix = self.sim([[1, 2], [0, 1]], ["a", "b"])
        with pytest.raises(DataError, match="symmetric"):
            threshold_graph(matrix, 0.5)

    def test_diagonal_ignored(self):
        matrix = self.sim([[9, 0], [0, 9]], ["a", "b"])
        with pytest.warns(CowordMapWarning):
            g = threshold_graph(matrix, 1.0, rule="geq")
        assert not g.edges  # no self-loops from the diagonal


class TestGraph:
    def test_rejects_self_loops(self):
        with pytest.raises(DataError, match="self-loop"):
            Graph(nodes=[Node("a"), Node("b")], edges=[Edge(0, 0, 1.0)])

    def test_rejects_duplicate_labels(self):
        with pytest.raises(DataError, match="duplicate"):
            Graph(nodes=[Node("a"), Node("a")])

    def test_rejects_out_of_range_edges(self):
        with pytest.raises(DataError, match="out of range"):
            Graph(nodes=[Node("a")], edges=[Edge(0, 1, 1.0)])

    def test_components_and_subgraph(self):
        g = Graph(
            nodes=[Node(l) for l in "abcde"],
            edges=[Edge(0, 1, 1.0), Edge(2, 3, 1.0)],
        )
        assert g.connected_components() == [[0, 1], [2, 3], [4]]
        sub = g.subgraph([2, 3])
        assert sub.labels == ["c", "d"]
        assert sub.edges == [Edge(0, 1, 1.0)]
