"""One-mode structure from the two-mode matrix: similarity, co-occurrence, graphs.

The occurrence matrix ``A`` (documents x terms) can be compared column-wise
(or row-wise) with the cosine or the Pearson correlation, or multiplied with
its own transpose: ``A'A`` counts word co-occurrences and ``AA'`` counts
shared vocabulary between documents. Thresholding any of these symmetric
matrices yields the undirected graph behind a map.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .corpus import WordDocMatrix
from .errors import ConfigError, CowordMapWarning, DataError
from .termstats import ObsExpMatrix

__all__ = [
    "CoocMatrix",
    "Edge",
    "Graph",
    "Node",
    "SimilarityMatrix",
    "cooccurrence",
    "cosine_matrix",
    "pearson_matrix",
    "threshold_graph",
]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric pairwise similarities between labelled vectors."""

    values: np.ndarray
    labels: list[str]
    kind: str  # "cosine" or "pearson"


@dataclass(frozen=True)
class CoocMatrix:
    """Integer co-occurrence counts: ``A'A`` over words or ``AA'`` over documents."""

    values: np.ndarray
    labels: list[str]
    mode: str  # "words" or "documents"


@dataclass(frozen=True)
class Node:
    """Graph node: a term, document, or factor.

    ``size`` feeds node radii in rendered maps; ``color``/``group`` carry a
    factor assignment when one exists.
    """

    label: str
    color: str | None = None
    group: int | None = None
    size: float | None = None


@dataclass(frozen=True)
class Edge:
    """Undirected weighted edge between node indices ``a < b``.

    ``dotted`` marks edges drawn with a dashed stroke (negative factor
    loadings).
    """

    a: int
    b: int
    weight: float
    dotted: bool = False


@dataclass
class Graph:
    """Undirected weighted graph with unique node labels and no self-loops."""

    nodes: list[Node] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)

    def __post_init__(self) -> None:
        labels = [n.label for n in self.nodes]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise DataError(f"duplicate node labels: {', '.join(dupes[:5])}")
        n = len(self.nodes)
        for e in self.edges:
            if e.a == e.b:
                raise DataError(f"self-loop on node {e.a}")
            if not (0 <= e.a < n and 0 <= e.b < n):
                raise DataError(f"edge ({e.a}, {e.b}) out of range for {n} nodes")
            if not np.isfinite(e.weight):
                raise DataError(f"non-finite edge weight on ({e.a}, {e.b})")

    @property
    def labels(self) -> list[str]:
        return [n.label for n in self.nodes]

    def adjacency(self) -> list[list[int]]:
        """Neighbour lists in node order."""
        adj: list[list[int]] = [[] for _ in self.nodes]
        for e in self.edges:
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
        return adj

    def connected_components(self) -> list[list[int]]:
        """Node-index components, each sorted, ordered by first node."""
        adj = self.adjacency()
        seen = [False] * len(self.nodes)
        components: list[list[int]] = []
        for start in range(len(self.nodes)):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            components.append(sorted(comp))
        return components

    def subgraph(self, node_indices: list[int]) -> "Graph":
        """Graph induced on ``node_indices`` (order preserved)."""
        remap = {v: i for i, v in enumerate(node_indices)}
        keep = set(node_indices)
        return Graph(
            nodes=[self.nodes[v] for v in node_indices],
            edges=[
                replace(e, a=remap[e.a], b=remap[e.b])
                for e in self.edges
                if e.a in keep and e.b in keep
            ],
        )


def _vectors(m, orientation: str, labels: list[str] | None):
    """Pull (variables-as-columns matrix, labels) out of the accepted inputs."""
    if isinstance(m, WordDocMatrix):
        values, row_labels, col_labels = m.counts.astype(float), m.doc_ids, m.terms
    elif isinstance(m, ObsExpMatrix):
        values, row_labels, col_labels = m.values, m.doc_ids, m.terms
    else:
        values = np.asarray(m, dtype=float)
        if values.ndim != 2:
            raise DataError("expected a 2-D matrix")
        row_labels = [f"r{i}" for i in range(values.shape[0])]
        col_labels = [f"c{k}" for k in range(values.shape[1])]
    if orientation == "columns":
        out_labels = list(labels) if labels is not None else list(col_labels)
        data = values
    elif orientation == "rows":
        out_labels = list(labels) if labels is not None else list(row_labels)
        data = values.T
    else:
        raise ConfigError(f"unknown orientation {orientation!r}; use columns or rows")
    if len(out_labels) != data.shape[1]:
        raise DataError("label count does not match the number of vectors")
    return data, out_labels


def _mirror_upper(values: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one for exact symmetry."""
    return np.triu(values, 1) + np.triu(values, 1).T + np.diag(np.diag(values))


def cosine_matrix(
    m, orientation: str = "columns", labels: list[str] | None = None
) -> SimilarityMatrix:
    """Pairwise cosine similarity of the chosen vectors.

    Accepts raw counts, a :class:`~cowordmap.corpus.WordDocMatrix`, an
    :class:`~cowordmap.termstats.ObsExpMatrix`, or any real matrix. The
    result is exactly symmetric with a unit diagonal.

    Raises:
        DataError: A vector is all zeros (the pipeline should have pruned it).
    """
    data, out_labels = _vectors(m, orientation, labels)
    norms = np.linalg.norm(data, axis=0)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise DataError(
            "cosine undefined for all-zero vectors: "
            + ", ".join(out_labels[int(k)] for k in zero[:5])
        )
    values = (data.T @ data) / np.outer(norms, norms)
    values = _mirror_upper(values)
    np.fill_diagonal(values, 1.0)
    return SimilarityMatrix(values=values, labels=out_labels, kind="cosine")


def pearson_matrix(
    m, orientation: str = "columns", labels: list[str] | None = None
) -> SimilarityMatrix:
    """Pairwise Pearson correlation of the chosen vectors.

    Constant vectors have no defined correlation and are dropped from the
    result with a warning naming them (count data often yields constants
    after heavy pruning).
    """
    data, out_labels = _vectors(m, orientation, labels)
    centered = data - data.mean(axis=0)
    norms = np.linalg.norm(centered, axis=0)
    constant = np.flatnonzero(norms == 0)
    if constant.size:
        warnings.warn(
            "dropped constant vectors before correlation: "
            + ", ".join(out_labels[int(k)] for k in constant),
            CowordMapWarning,
            stacklevel=2,
        )
        keep = np.flatnonzero(norms > 0)
        centered = centered[:, keep]
        norms = norms[keep]
        out_labels = [out_labels[int(k)] for k in keep]
    if centered.shape[1] == 0:
        raise DataError("all vectors are constant; correlation matrix is empty")
    values = (centered.T @ centered) / np.outer(norms, norms)
    values = np.clip(_mirror_upper(values), -1.0, 1.0)
    np.fill_diagonal(values, 1.0)
    return SimilarityMatrix(values=values, labels=out_labels, kind="pearson")


def cooccurrence(m: WordDocMatrix, mode: str = "words") -> CoocMatrix:
    """Multiply the matrix with its transpose, in exact integer arithmetic.

    ``"words"`` gives ``A'A`` (terms x terms, diagonal = sum of squared
    counts per term, which is the document frequency for binary counts);
    ``"documents"`` gives ``AA'``.
    """
    if mode == "words":
        values = m.counts.T @ m.counts
        labels = list(m.terms)
    elif mode == "documents":
        values = m.counts @ m.counts.T
        labels = list(m.doc_ids)
    else:
        raise ConfigError(f"unknown mode {mode!r}; use words or documents")
    return CoocMatrix(values=values, labels=labels, mode=mode)


def threshold_graph(
    matrix: SimilarityMatrix | CoocMatrix,
    threshold: float,
    rule: str = "geq",
) -> Graph:
    """Keep the node set and the edges whose value passes the threshold.

    Args:
        matrix: A symmetric similarity or co-occurrence matrix.
        threshold: Cut value.
        rule: ``"geq"`` keeps values >= threshold (cosine maps),
            ``"gt"`` keeps values strictly above it (co-occurrence maps).

    Returns:
        Graph over all labels; isolated nodes are retained. The diagonal is
        ignored. An empty edge set is allowed and reported as a warning.
    """
    if rule not in ("geq", "gt"):
        raise ConfigError(f"unknown rule {rule!r}; use geq or gt")
    values = matrix.values
    if values.shape[0] != values.shape[1] or not np.allclose(
        values, values.T, atol=1e-12
    ):
        raise DataError("threshold_graph requires a symmetric matrix")
    nodes = [Node(label=l) for l in matrix.labels]
    edges = []
    n = len(nodes)
    for a in range(n):
        for b in range(a + 1, n):
            v = float(values[a, b])
            if v >= threshold if rule == "geq" else v > threshold:
                edges.append(Edge(a=a, b=b, weight=v))
    if not edges:
        warnings.warn(
            f"no edges at threshold {threshold} ({rule}); the map is {n} isolated nodes",
            CowordMapWarning,
            stacklevel=2,
        )
    return Graph(nodes=nodes, edges=edges)
