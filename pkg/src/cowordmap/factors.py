"""Latent structure: principal-components factors, varimax rotation, SVD.

Factor extraction works on the correlation matrix of the two-mode matrix
itself (not of a one-mode co-occurrence matrix): variables are the columns
in R-mode or the rows in Q-mode, cells are raw counts or obs/exp ratios.
Loadings are eigenvectors scaled by the square root of their eigenvalues,
optionally varimax-rotated; variables can then be assigned to (and colored
by) the factor they load highest on, with small loadings suppressed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .corpus import WordDocMatrix
from .errors import ConfigError, CowordMapWarning, DataError
from .termstats import obs_exp
from .vectorspace import Edge, Graph, Node, pearson_matrix

__all__ = [
    "UNASSIGNED",
    "FactorAssignment",
    "FactorSolution",
    "SvdResult",
    "assign_factors",
    "factor_analyze",
    "factor_graph",
    "truncated_svd",
    "varimax",
]

UNASSIGNED = -1


@dataclass(frozen=True)
class FactorSolution:
    """Loadings of variables on retained factors.

    Attributes:
        loadings: (variables x factors) matrix; rotated when ``rotated``.
        eigenvalues: Extraction-stage eigenvalues of the retained factors.
        explained_variance_pct: 100 * eigenvalue / n_variables, per factor,
            before rotation.
        rotated: Whether a rotation has been applied.
        variable_labels: One label per loading row.
        input_mode: "counts" or "obsexp".
        orientation: "R" (columns as variables) or "Q" (rows as variables).
        correlation: The correlation matrix that was decomposed.
        eigenvectors: Unit eigenvectors of the retained factors (columns).
        rotation_matrix: Orthogonal matrix T with rotated = unrotated @ T,
            or None before rotation.
        rotation_sweeps: Rotation sweeps performed.
        rotation_converged: Whether the criterion gain fell below tolerance.
        criterion_history: Varimax criterion after each sweep.
    """

    loadings: np.ndarray
    eigenvalues: np.ndarray
    explained_variance_pct: np.ndarray
    rotated: bool
    variable_labels: list[str]
    input_mode: str
    orientation: str
    correlation: np.ndarray
    eigenvectors: np.ndarray
    rotation_matrix: np.ndarray | None = None
    rotation_sweeps: int = 0
    rotation_converged: bool = True
    criterion_history: tuple[float, ...] = ()

    @property
    def n_factors(self) -> int:
        return self.loadings.shape[1]

    def communalities(self) -> np.ndarray:
        """Squared loadings summed per variable."""
        return (self.loadings**2).sum(axis=1)


@dataclass(frozen=True)
class FactorAssignment:
    """Which factor each variable belongs to, if any.

    ``factor[j]`` is the 0-based index of the factor with the largest
    absolute loading for variable ``j``, or :data:`UNASSIGNED` when that
    loading sits inside the closed suppression interval. ``sign[j]`` is the
    sign of the decisive loading (0 when unassigned).
    """

    labels: list[str]
    factor: np.ndarray
    sign: np.ndarray
    suppression: float


@dataclass(frozen=True)
class SvdResult:
    """Best rank-k factorization U * diag(s) * V'."""

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray
    rank: int


def _apply_sign_convention(loadings: np.ndarray) -> np.ndarray:
    """Flip factor columns so the largest-magnitude loading is non-negative."""
    flips = np.ones(loadings.shape[1])
    for f in range(loadings.shape[1]):
        j = int(np.argmax(np.abs(loadings[:, f])))
        if loadings[j, f] < 0:
            flips[f] = -1.0
    return flips


def _cells(m, input_mode: str) -> tuple[np.ndarray, list[str], list[str]]:
    if isinstance(m, WordDocMatrix):
        if input_mode == "counts":
            data = m.counts.astype(float)
        elif input_mode == "obsexp":
            data = obs_exp(m).values
        else:
            raise ConfigError(
                f"unknown input_mode {input_mode!r}; use counts or obsexp"
            )
        return data, list(m.doc_ids), list(m.terms)
    data = np.asarray(m, dtype=float)
    if data.ndim != 2:
        raise DataError("expected a 2-D matrix")
    if input_mode == "obsexp":
        if (data < 0).any():
            raise DataError("obs/exp cells need a nonnegative matrix")
        rows, cols = data.sum(axis=1), data.sum(axis=0)
        if (rows == 0).any() or (cols == 0).any():
            raise DataError("obs/exp cells need nonzero margins; prune first")
        data = data / (np.outer(rows, cols) / data.sum())
    row_labels = [f"r{i}" for i in range(data.shape[0])]
    col_labels = [f"c{k}" for k in range(data.shape[1])]
    return data, row_labels, col_labels


def factor_analyze(
    m,
    input_mode: str = "counts",
    orientation: str = "R",
    k: int | str = "kaiser",
) -> FactorSolution:
    """Extract principal-components factors from the correlation matrix.

    Args:
        m: Two-mode matrix (:class:`~cowordmap.corpus.WordDocMatrix` or
            array), cases x variables in R orientation.
        input_mode: Correlate raw ``"counts"`` or ``"obsexp"`` ratios.
        orientation: ``"R"`` treats columns as variables; ``"Q"`` transposes
            the matrix and runs the identical path over the rows.
        k: Number of factors to retain, or ``"kaiser"`` for all factors with
            eigenvalue > 1.

    Returns:
        Unrotated solution with a deterministic sign convention: in each
        factor the largest-magnitude loading is non-negative.

    Raises:
        DataError: Fewer than 2 non-constant variables, or Kaiser retains
            nothing.
        ConfigError: ``k`` is not "kaiser" or a positive integer.
    """
    data, row_labels, col_labels = _cells(m, input_mode)
    if orientation == "R":
        variable_labels = col_labels
    elif orientation == "Q":
        data = data.T
        variable_labels = row_labels
    else:
        raise ConfigError(f"unknown orientation {orientation!r}; use R or Q")

    corr = pearson_matrix(data, orientation="columns", labels=variable_labels)
    p = len(corr.labels)
    if p < 2:
        raise DataError(
            f"factor analysis needs at least 2 non-constant variables, got {p}"
        )

    eigenvalues, eigenvectors = np.linalg.eigh(corr.values)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]

    if k == "kaiser":
        retained = int((eigenvalues > 1.0).sum())
        if retained == 0:
            raise DataError(
                "no eigenvalue exceeds 1; the variables look uncorrelated. "
                "Pass an explicit factor count instead of the Kaiser rule."
            )
    elif isinstance(k, int) and not isinstance(k, bool):
        if k <= 0:
            raise ConfigError(f"factor count must be positive, got {k}")
        retained = k
        if retained > p:
            warnings.warn(
                f"requested {k} factors but only {p} variables; clamping to {p}",
                CowordMapWarning,
                stacklevel=2,
            )
            retained = p
    else:
        raise ConfigError(f"k must be an integer or 'kaiser', got {k!r}")

    lam = np.maximum(eigenvalues[:retained], 0.0)  # noise can dip below 0
    vectors = eigenvectors[:, :retained]
    loadings = vectors * np.sqrt(lam)[np.newaxis, :]
    flips = _apply_sign_convention(loadings)
    return FactorSolution(
        loadings=loadings * flips,
        eigenvalues=eigenvalues[:retained],
        explained_variance_pct=100.0 * eigenvalues[:retained] / p,
        rotated=False,
        variable_labels=list(corr.labels),
        input_mode=input_mode,
        orientation=orientation,
        correlation=corr.values,
        eigenvectors=vectors * flips,
    )


def varimax_criterion(loadings: np.ndarray) -> float:
    """Sum over factors of the variance of squared loadings."""
    sq = loadings**2
    return float((sq**2).mean(axis=0).sum() - (sq.mean(axis=0) ** 2).sum())


def varimax(
    sol: FactorSolution,
    kaiser_normalize: bool = True,
    tol: float = 1e-10,
    max_iter: int = 100,
) -> FactorSolution:
    """Rotate the solution to maximize the varimax criterion.

    Sweeps the factor pairs (f, g) in lexicographic order, rotating each
    plane by the analytically optimal angle, until the criterion gain over a
    full sweep drops below ``tol`` or ``max_iter`` sweeps have run. With
    ``kaiser_normalize`` the rows are divided by the square roots of their
    communalities before rotation and rescaled afterwards.

    Per-variable communalities are preserved (rotation is orthogonal); the
    criterion never decreases from one sweep to the next.

    Returns:
        A rotated copy of ``sol``. A single-factor solution is returned
        unchanged with a notice.
    """
    if sol.n_factors < 2:
        warnings.warn(
            "varimax needs at least 2 factors; returning the solution unchanged",
            CowordMapWarning,
            stacklevel=2,
        )
        return sol

    loadings = sol.loadings.copy()
    p, k = loadings.shape
    scale = np.sqrt(sol.communalities())
    if kaiser_normalize:
        safe = np.where(scale > 0, scale, 1.0)
        loadings /= safe[:, np.newaxis]

    rotation = np.eye(k)
    history = [varimax_criterion(loadings)]
    converged = False
    sweeps = 0
    for _ in range(max_iter):
        for f in range(k - 1):
            for g in range(f + 1, k):
                x, y = loadings[:, f], loadings[:, g]
                u = x * x - y * y
                v = 2.0 * x * y
                a, b = u.sum(), v.sum()
                num = 2.0 * (np.dot(u, v) - a * b / p)
                den = np.dot(u, u) - np.dot(v, v) - (a * a - b * b) / p
                if num == 0.0 and den == 0.0:
                    continue
                phi = 0.25 * math.atan2(num, den)
                c, s = math.cos(phi), math.sin(phi)
                loadings[:, f], loadings[:, g] = c * x + s * y, -s * x + c * y
                rotation[:, [f, g]] = np.column_stack(
                    (c * rotation[:, f] + s * rotation[:, g],
                     -s * rotation[:, f] + c * rotation[:, g])
                )
        sweeps += 1
        history.append(varimax_criterion(loadings))
        if history[-1] - history[-2] < tol:
            converged = True
            break
    if not converged:
        warnings.warn(
            f"varimax did not converge in {max_iter} sweeps",
            CowordMapWarning,
            stacklevel=2,
        )

    if kaiser_normalize:
        loadings *= np.where(scale > 0, scale, 1.0)[:, np.newaxis]
    flips = _apply_sign_convention(loadings)
    return replace(
        sol,
        loadings=loadings * flips,
        rotated=True,
        rotation_matrix=rotation * flips,
        rotation_sweeps=sweeps,
        rotation_converged=converged,
        criterion_history=tuple(history),
    )


def assign_factors(sol: FactorSolution, suppression: float = 0.1) -> FactorAssignment:
    """Assign each variable to its highest-loading factor, or leave it out.

    A variable whose largest absolute loading lies inside the closed
    interval [-suppression, +suppression] stays unassigned (rendered white
    on maps). Ties between factors go to the lowest factor index.
    """
    abs_loadings = np.abs(sol.loadings)
    best = abs_loadings.argmax(axis=1)
    best_value = abs_loadings[np.arange(len(best)), best]
    assigned = best_value > suppression
    factor = np.where(assigned, best, UNASSIGNED)
    decisive = sol.loadings[np.arange(len(best)), best]
    sign = np.where(assigned, np.where(decisive >= 0, 1, -1), 0)
    return FactorAssignment(
        labels=list(sol.variable_labels),
        factor=factor.astype(np.int64),
        sign=sign.astype(np.int64),
        suppression=suppression,
    )


def factor_graph(sol: FactorSolution, suppression: float = 0.1) -> Graph:
    """Bipartite graph of variables and factors.

    Edges exist only for loadings strictly outside the closed suppression
    interval; their weight is the absolute loading and negative loadings
    are dotted.
    """
    p, k = sol.loadings.shape
    nodes = [Node(label=l) for l in sol.variable_labels]
    nodes += [Node(label=f"Factor {f + 1}", group=f) for f in range(k)]
    edges = []
    for j in range(p):
        for f in range(k):
            value = sol.loadings[j, f]
            if abs(value) > suppression:
                edges.append(
                    Edge(a=j, b=p + f, weight=abs(float(value)), dotted=value < 0)
                )
    return Graph(nodes=nodes, edges=edges)


def truncated_svd(m, k: int) -> SvdResult:
    """Best rank-k approximation via singular value decomposition.

    Signs are fixed so each left vector's largest-magnitude entry is
    non-negative, making results deterministic.
    """
    data = m.counts.astype(float) if isinstance(m, WordDocMatrix) else np.asarray(m, float)
    if data.ndim != 2:
        raise DataError("expected a 2-D matrix")
    max_rank = min(data.shape)
    if not 1 <= k <= max_rank:
        raise ConfigError(f"k must be between 1 and {max_rank}, got {k}")
    u, s, vh = np.linalg.svd(data, full_matrices=False)
    u, s, vh = u[:, :k], s[:k], vh[:k, :]
    for i in range(k):
        j = int(np.argmax(np.abs(u[:, i])))
        if u[j, i] < 0:
            u[:, i] *= -1
            vh[i, :] *= -1
    return SvdResult(left=u, singular_values=s, right=vh.T, rank=k)
