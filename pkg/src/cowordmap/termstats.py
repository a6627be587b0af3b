"""The four term-selection statistics and the expected/ratio matrices.

For a pruned count matrix with row margins ``R``, column margins ``C`` and
grand total ``T``:

* expected value per cell: ``E = R_i * C_k / T``
* tf-idf per cell: ``count * log2(n_docs / doc_freq)``
* chi-square per cell: ``(O - E)^2 / E``, optionally Yates-corrected
* obs/exp per cell: ``O / E``

A term can then be scored by total frequency, by its tf-idf column sum, by
its chi-square column contribution, or by its obs/exp column sum, and the
top terms selected for mapping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import WordDocMatrix
from .errors import ConfigError, DataError

__all__ = [
    "ChiSquareReport",
    "CRITERIA",
    "ExpectedMatrix",
    "ObsExpMatrix",
    "TermScores",
    "chi_square",
    "chi_square_per_term",
    "expected_matrix",
    "obs_exp",
    "select_terms",
    "term_scores",
    "tfidf_matrix",
    "tfidf_per_term",
]

CRITERIA = ("freq", "tfidf", "chi2", "obsexp")


@dataclass(frozen=True)
class ExpectedMatrix:
    """Cell values expected from the margins alone (independence model)."""

    values: np.ndarray
    doc_ids: list[str]
    terms: list[str]


@dataclass(frozen=True)
class ObsExpMatrix:
    """Per-cell observed/expected ratios, with column sums per term.

    A cell is 0 exactly where the observed count is 0; ``term_sums[k]``
    says how far term ``k`` occurs above (``> n_docs``) or below
    expectation over the whole document set.
    """

    values: np.ndarray
    doc_ids: list[str]
    terms: list[str]
    term_sums: np.ndarray


@dataclass(frozen=True)
class ChiSquareReport:
    """Chi-square decomposition of a count matrix.

    Attributes:
        total: Sum of all per-cell contributions.
        degrees_of_freedom: ``(rows - 1) * (cols - 1)``.
        per_cell: Contribution of each cell.
        yates_applied: True where the small-count correction was used.
    """

    total: float
    degrees_of_freedom: int
    per_cell: np.ndarray
    yates_applied: np.ndarray
    terms: list[str]


@dataclass(frozen=True)
class TermScores:
    """All four selection scores for every term, in matrix column order."""

    terms: list[str]
    freq: np.ndarray
    doc_freq: np.ndarray
    tfidf: np.ndarray
    chi2: np.ndarray
    obs_exp_sum: np.ndarray

    def by_criterion(self, criterion: str) -> np.ndarray:
        if criterion not in CRITERIA:
            raise ConfigError(
                f"unknown criterion {criterion!r}; valid values: "
                + ", ".join(CRITERIA)
            )
        return {
            "freq": self.freq,
            "tfidf": self.tfidf,
            "chi2": self.chi2,
            "obsexp": self.obs_exp_sum,
        }[criterion]


def expected_matrix(m: WordDocMatrix) -> ExpectedMatrix:
    """Compute expected cell values from the margin totals.

    Row and column sums of the result equal those of the observed matrix;
    all entries are positive because the input is pruned.
    """
    values = np.outer(m.row_margins, m.col_margins) / m.total
    return ExpectedMatrix(values=values, doc_ids=list(m.doc_ids), terms=list(m.terms))


def tfidf_matrix(m: WordDocMatrix) -> np.ndarray:
    """Weight each cell by term frequency times log2(n_docs / doc_freq).

    A term present in every document gets an all-zero column.
    """
    doc_freq = (m.counts > 0).sum(axis=0)
    idf = np.log2(m.n_docs / doc_freq)
    return m.counts * idf[np.newaxis, :]


def tfidf_per_term(m: WordDocMatrix) -> np.ndarray:
    """Aggregate tf-idf per term as the column sum of :func:`tfidf_matrix`."""
    return tfidf_matrix(m).sum(axis=0)


def chi_square(m: WordDocMatrix, yates: str = "observed_lt_5") -> ChiSquareReport:
    """Decompose the matrix chi-square into per-cell contributions.

    Args:
        m: Pruned count matrix.
        yates: ``"observed_lt_5"`` corrects every cell whose observed count
            is below 5, replacing ``(O - E)^2 / E`` with
            ``(max(|O - E| - 0.5, 0))^2 / E``; ``"off"`` disables the
            correction. The corrected contribution is never larger than the
            uncorrected one.
    """
    if yates not in ("off", "observed_lt_5"):
        raise ConfigError(f"unknown yates mode {yates!r}; use off or observed_lt_5")
    observed = m.counts.astype(float)
    expected = np.outer(m.row_margins, m.col_margins) / m.total
    deviation = np.abs(observed - expected)
    applied = np.zeros(observed.shape, dtype=bool)
    if yates == "observed_lt_5":
        applied = m.counts < 5
        deviation = np.where(applied, np.maximum(deviation - 0.5, 0.0), deviation)
    per_cell = deviation**2 / expected
    dof = (m.n_docs - 1) * (m.n_terms - 1)
    return ChiSquareReport(
        total=float(per_cell.sum()),
        degrees_of_freedom=max(dof, 1),
        per_cell=per_cell,
        yates_applied=applied,
        terms=list(m.terms),
    )


def chi_square_per_term(report: ChiSquareReport) -> np.ndarray:
    """Sum the chi-square contributions of each column; sums to the total."""
    return report.per_cell.sum(axis=0)


def obs_exp(m: WordDocMatrix) -> ObsExpMatrix:
    """Divide each observed count by its expected value.

    On a uniform matrix every cell is 1 and every column sums to the number
    of documents.
    """
    expected = np.outer(m.row_margins, m.col_margins) / m.total
    values = m.counts / expected
    return ObsExpMatrix(
        values=values,
        doc_ids=list(m.doc_ids),
        terms=list(m.terms),
        term_sums=values.sum(axis=0),
    )


def term_scores(m: WordDocMatrix, yates: str = "observed_lt_5") -> TermScores:
    """Compute all four selection scores for every term of the matrix."""
    report = chi_square(m, yates=yates)
    return TermScores(
        terms=list(m.terms),
        freq=m.col_margins.astype(np.int64),
        doc_freq=(m.counts > 0).sum(axis=0).astype(np.int64),
        tfidf=tfidf_per_term(m),
        chi2=chi_square_per_term(report),
        obs_exp_sum=obs_exp(m).term_sums,
    )


def select_terms(
    scores: TermScores,
    criterion: str,
    top_n: int | None = None,
    threshold: float | None = None,
) -> list[str]:
    """Pick terms by one of the four criteria.

    Terms are sorted by descending score, ties broken lexicographically,
    then cut at ``top_n`` or filtered to scores ``>= threshold`` (exactly
    one of the two must be given).

    Raises:
        ConfigError: Bad criterion or cut parameters.
        DataError: The selection is empty.
    """
    if (top_n is None) == (threshold is None):
        raise ConfigError("give exactly one of top_n and threshold")
    if top_n is not None and top_n < 1:
        raise ConfigError(f"top_n must be >= 1, got {top_n}")
    values = scores.by_criterion(criterion)
    order = sorted(range(len(scores.terms)), key=lambda k: (-values[k], scores.terms[k]))
    if top_n is not None:
        picked = order[:top_n]
    else:
        picked = [k for k in order if values[k] >= threshold]
    if not picked:
        raise DataError(
            f"no terms selected by criterion {criterion!r} at threshold {threshold}"
        )
    return [scores.terms[k] for k in picked]
