"""End-to-end orchestration: configuration, staged execution, artifacts.

A run turns an input corpus into nine artifacts inside the output
directory:

========== ==================================================
ingest     matrix.csv (observed counts), expected.csv (margins)
terms      terms.csv (per-term scores)
cooc       coocc.dat (selected-term co-occurrence, Pajek matrix)
factors    loadings.csv, factors.net (variable-factor graph)
map        map.net (thresholded similarity/co-occurrence map)
render     map.svg (map with factor coloring)
(always)   report.json (config echo, counts, pruning, warnings)
========== ==================================================

Each stage is cached under a content hash of its inputs and the config
keys it depends on; a repeated run skips the file writes of unchanged
stages. Identical inputs, config and seed produce byte-identical artifacts.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import export, layout as layout_mod, termstats, vectorspace
from . import factors as factors_mod
from ._stopwords import DEFAULT_STOPWORDS
from .errors import ConfigError, DataError

__all__ = ["ARTIFACTS", "PipelineConfig", "RunResult", "run", "run_stage"]

logger = logging.getLogger("cowordmap")

STAGE_ORDER = ("ingest", "terms", "cooc", "factors", "map", "render")

STAGE_ARTIFACTS: dict[str, tuple[str, ...]] = {
    "ingest": ("matrix.csv", "expected.csv"),
    "terms": ("terms.csv",),
    "cooc": ("coocc.dat",),
    "factors": ("loadings.csv", "factors.net"),
    "map": ("map.net",),
    "render": ("map.svg",),
}

ARTIFACTS = (
    "terms.csv", "matrix.csv", "expected.csv", "loadings.csv",
    "coocc.dat", "map.net", "factors.net", "map.svg", "report.json",
)

PREFIXES: dict[str, tuple[str, ...]] = {
    "ingest": ("ingest",),
    "terms": ("ingest", "terms"),
    "cooc": ("ingest", "terms", "cooc"),
    "factors": ("ingest", "terms", "factors"),
    "map": ("ingest", "terms", "map"),
    "render": ("ingest", "terms", "factors", "map", "render"),
    "run": STAGE_ORDER,
}

_MANIFEST = ".coword-cache.json"

_BOOL_KEYS = ("lowercase", "binary", "rotate", "kaiser_normalize")
_CHOICES = {
    "input_format": ("files", "lines"),
    "criterion": termstats.CRITERIA,
    "yates": ("observed_lt_5", "off"),
    "cells": ("counts", "tfidf", "obsexp"),
    "map": ("cosine", "cooc"),
    "mode": ("R", "Q"),
    "layout": ("fr", "kk"),
}


@dataclass(frozen=True)
class PipelineConfig:
    """Every pipeline switch, with its default.

    Built from a flat ``key = value`` configuration file plus command-line
    overrides (flags win). Unknown keys are rejected.
    """

    input: str = ""
    input_format: str = "files"
    lowercase: bool = True
    token_pattern: str = r"[^\W_]+"
    min_token_length: int = 1
    stopword_file: str | None = None
    synonym_file: str | None = None
    binary: bool = False
    criterion: str = "obsexp"
    top: int | None = 30
    min_score: float | None = None
    yates: str = "observed_lt_5"
    cells: str = "counts"
    map: str = "cosine"
    cos_threshold: float = 0.1
    cooc_threshold: float = 1.0
    factors: int | str = "kaiser"
    rotate: bool = True
    kaiser_normalize: bool = True
    mode: str = "R"
    suppression: float = 0.1
    layout: str = "fr"
    fr_iterations: int = 500
    kk_tol: float = 1e-6
    kk_max_iter: int = 1000
    seed: int = 42
    out: str = "coword-out"
    threads: int = 1

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))

    @classmethod
    def build(
        cls,
        file_values: dict | None = None,
        overrides: dict | None = None,
    ) -> "PipelineConfig":
        """Merge defaults, config-file values, and flag overrides.

        Setting ``min_score`` without also setting ``top`` switches the
        selection from the default top-30 cut to the score threshold.
        """
        merged: dict = {}
        for source in (file_values or {}, overrides or {}):
            for key, value in source.items():
                if key not in cls.field_names():
                    raise ConfigError(f"unknown configuration key {key!r}")
                merged[key] = value
        if "min_score" in merged and merged["min_score"] is not None:
            if merged.get("top") is not None:
                raise ConfigError("give either top or min_score, not both")
            merged["top"] = None
        config = cls(**merged)
        config.validate()
        return config

    @classmethod
    def from_file(cls, path: str | Path, overrides: dict | None = None) -> "PipelineConfig":
        """Parse a ``key = value`` configuration file (# starts a comment)."""
        values: dict = {}
        for lineno, raw in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in cls.field_names():
                raise ConfigError(f"{path}:{lineno}: unknown configuration key {key!r}")
            values[key] = _parse_value(key, value, f"{path}:{lineno}")
        return cls.build(values, overrides)

    def validate(self) -> None:
        if not self.input:
            raise ConfigError("input is required (config key 'input' or --input)")
        for key, choices in _CHOICES.items():
            if getattr(self, key) not in choices:
                raise ConfigError(
                    f"invalid {key} {getattr(self, key)!r}; valid values: "
                    + ", ".join(choices)
                )
        if (self.top is None) == (self.min_score is None):
            raise ConfigError("give exactly one of top and min_score")
        if self.top is not None and self.top < 1:
            raise ConfigError(f"top must be >= 1, got {self.top}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if not (isinstance(self.factors, int) and not isinstance(self.factors, bool)
                and self.factors >= 1) and self.factors != "kaiser":
            raise ConfigError(
                f"factors must be a positive integer or 'kaiser', got {self.factors!r}"
            )
        if self.min_token_length < 1:
            raise ConfigError(
                f"min_token_length must be >= 1, got {self.min_token_length}"
            )

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _parse_value(key: str, value: str, where: str):
    """Parse one config-file value into the type the key expects."""
    try:
        if key in _BOOL_KEYS:
            low = value.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(f"expected a boolean, got {value!r}")
        if key in ("min_token_length", "top", "fr_iterations", "kk_max_iter",
                   "seed", "threads"):
            return int(value)
        if key in ("min_score", "cos_threshold", "cooc_threshold",
                   "suppression", "kk_tol"):
            return float(value)
        if key == "factors":
            return value if value == "kaiser" else int(value)
        return value
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


@dataclass
class RunResult:
    """What a pipeline invocation produced."""

    out_dir: Path
    artifacts: dict[str, Path]
    stages: dict[str, str]  # stage -> "computed" | "cached"
    report: dict


@dataclass
class _State:
    """In-memory products shared between stages of one invocation."""

    config: PipelineConfig
    matrix: corpus_mod.WordDocMatrix | None = None
    documents_total: int = 0
    pruned_documents: list[str] = field(default_factory=list)
    scores: termstats.TermScores | None = None
    order: list[int] = field(default_factory=list)
    selected: list[str] = field(default_factory=list)
    selected_matrix: corpus_mod.WordDocMatrix | None = None
    solution: factors_mod.FactorSolution | None = None
    assignment: factors_mod.FactorAssignment | None = None
    map_graph: vectorspace.Graph | None = None
    map_layout: layout_mod.Layout | None = None
    warnings: dict[str, list[str]] = field(default_factory=dict)


def _digest(parts: list) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(repr(part).encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


def _file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _input_digest(config: PipelineConfig) -> str:
    source = Path(config.input)
    if not source.exists():
        raise FileNotFoundError(f"corpus source not found: {source}")
    if config.input_format == "files":
        if not source.is_dir():
            raise FileNotFoundError(f"not a directory: {source}")
        parts = [(p.name, _file_digest(p)) for p in sorted(source.glob("*.txt"))]
        return _digest(parts)
    return _file_digest(source)


def _stage_keys(config: PipelineConfig) -> dict[str, str]:
    """Content-hash cache key per stage, from inputs plus config slices."""
    aux = []
    for path in (config.stopword_file, config.synonym_file):
        aux.append(_file_digest(Path(path)) if path else "default")
    ingest = _digest([
        "ingest", _input_digest(config), config.input_format, config.lowercase,
        config.token_pattern, config.min_token_length, aux, config.binary,
    ])
    terms = _digest(["terms", ingest, config.criterion, config.yates])
    selection = (config.top, config.min_score)
    cooc = _digest(["cooc", terms, selection])
    factors = _digest([
        "factors", terms, selection, config.cells, config.mode, config.factors,
        config.rotate, config.kaiser_normalize, config.suppression,
    ])
    map_key = _digest([
        "map", terms, selection, config.cells, config.map, config.cos_threshold,
        config.cooc_threshold, config.layout, config.seed, config.fr_iterations,
        config.kk_tol, config.kk_max_iter,
    ])
    render = _digest(["render", map_key, factors])
    return {
        "ingest": ingest, "terms": terms, "cooc": cooc,
        "factors": factors, "map": map_key, "render": render,
    }


def _tokenizer_config(config: PipelineConfig) -> corpus_mod.TokenizerConfig:
    stopwords = DEFAULT_STOPWORDS
    if config.stopword_file:
        stopwords = corpus_mod.load_stopword_file(config.stopword_file)
    synonyms = {}
    if config.synonym_file:
        synonyms = corpus_mod.load_synonym_file(config.synonym_file)
    return corpus_mod.TokenizerConfig(
        lowercase=config.lowercase,
        token_pattern=config.token_pattern,
        min_token_length=config.min_token_length,
        stopwords=stopwords,
        synonyms=synonyms,
    )


def _layout_fn(config: PipelineConfig):
    if config.layout == "fr":
        return lambda g, seed: layout_mod.fruchterman_reingold(
            g, iterations=config.fr_iterations, seed=seed, use_weights=True
        )
    return lambda g, seed: layout_mod.kamada_kawai(
        g, tol=config.kk_tol, max_iter=config.kk_max_iter, seed=seed
    )


def _cells_matrix(state: _State, which: str) -> np.ndarray:
    m = state.selected_matrix
    if which == "counts":
        return m.counts.astype(float)
    if which == "tfidf":
        return termstats.tfidf_matrix(m)
    return termstats.obs_exp(m).values


# ---------------------------------------------------------------------------
# stage bodies


def _compute_ingest(state: _State, out: Path) -> None:
    config = state.config
    corpus = corpus_mod.load_corpus(config.input, format=config.input_format)
    cfg = _tokenizer_config(config)
    vocab = corpus_mod.build_vocabulary(corpus, cfg, threads=config.threads)
    state.matrix = corpus_mod.build_word_doc_matrix(
        corpus, vocab, cfg, binary=config.binary, threads=config.threads
    )
    state.documents_total = len(corpus)
    state.pruned_documents = list(state.matrix.pruned_docs)
    export.write_csv(
        state.matrix.counts, out / "matrix.csv",
        state.matrix.doc_ids, state.matrix.terms,
    )
    expected = termstats.expected_matrix(state.matrix)
    export.write_csv(
        expected.values, out / "expected.csv", expected.doc_ids, expected.terms
    )


def _load_ingest(state: _State, out: Path) -> None:
    try:
        values, doc_ids, terms = export.read_csv_matrix(out / "matrix.csv")
        state.matrix = corpus_mod.WordDocMatrix(
            values.astype(np.int64), doc_ids, doc_ids, terms
        )
    except Exception as exc:
        raise DataError(
            f"cached matrix.csv is unreadable ({exc}); rerun the ingest stage"
        ) from exc


def _prepare_selection(state: _State) -> None:
    config = state.config
    state.scores = termstats.term_scores(state.matrix, yates=config.yates)
    values = state.scores.by_criterion(config.criterion)
    state.order = sorted(
        range(len(state.scores.terms)),
        key=lambda k: (-values[k], state.scores.terms[k]),
    )
    state.selected = termstats.select_terms(
        state.scores, config.criterion, top_n=config.top, threshold=config.min_score
    )
    state.selected_matrix = state.matrix.select_terms(state.selected)


def _compute_terms(state: _State, out: Path) -> None:
    scores = state.scores
    rows = [
        (
            scores.terms[k], int(scores.freq[k]), int(scores.doc_freq[k]),
            float(scores.tfidf[k]), float(scores.chi2[k]),
            float(scores.obs_exp_sum[k]),
        )
        for k in state.order
    ]
    export.write_table_csv(
        out / "terms.csv",
        ["term", "freq", "docfreq", "tfidf", "chi2", "obs_exp_sum"],
        rows,
    )


def _compute_cooc(state: _State, out: Path) -> None:
    cooc = vectorspace.cooccurrence(state.selected_matrix, mode="words")
    export.write_pajek_matrix(cooc, out / "coocc.dat")


def _compute_factors(state: _State, out: Path, write: bool = True) -> None:
    config = state.config
    factor_cells = config.cells if config.cells in ("counts", "obsexp") else "counts"
    solution = factors_mod.factor_analyze(
        state.selected_matrix,
        input_mode=factor_cells,
        orientation=config.mode,
        k=config.factors,
    )
    if config.rotate and solution.n_factors >= 2:
        solution = factors_mod.varimax(
            solution, kaiser_normalize=config.kaiser_normalize
        )
    state.solution = solution
    state.assignment = factors_mod.assign_factors(solution, config.suppression)
    if not write:
        return
    header = (
        ["variable"]
        + [f"factor_{f + 1}" for f in range(solution.n_factors)]
        + ["communality"]
    )
    communality = solution.communalities()
    rows = [
        (
            label,
            *(float(v) for v in solution.loadings[j]),
            float(communality[j]),
        )
        for j, label in enumerate(solution.variable_labels)
    ]
    export.write_table_csv(out / "loadings.csv", header, rows)
    # No coordinates: factors.net is the bipartite structure itself, and a
    # network program can lay it out; this also keeps the factors stage
    # independent of the layout seed.
    graph = factors_mod.factor_graph(solution, config.suppression)
    export.write_pajek_net(graph, None, out / "factors.net")


def _compute_map(state: _State, out: Path, write: bool = True) -> None:
    config = state.config
    if config.map == "cosine":
        sim = vectorspace.cosine_matrix(
            _cells_matrix(state, config.cells), labels=state.selected_matrix.terms
        )
        graph = vectorspace.threshold_graph(sim, config.cos_threshold, rule="geq")
    else:
        cooc = vectorspace.cooccurrence(state.selected_matrix, mode="words")
        graph = vectorspace.threshold_graph(cooc, config.cooc_threshold, rule="gt")
    freq = dict(zip(state.selected_matrix.terms, state.selected_matrix.col_margins))
    graph = vectorspace.Graph(
        nodes=[
            dataclasses.replace(n, size=float(freq.get(n.label, 0)))
            for n in graph.nodes
        ],
        edges=graph.edges,
    )
    state.map_graph = graph
    state.map_layout = layout_mod.split_and_pack(graph, _layout_fn(config), seed=config.seed)
    if write:
        export.write_pajek_net(graph, state.map_layout, out / "map.net")


def _compute_render(state: _State, out: Path) -> None:
    # Q-mode assigns documents, not the mapped terms, so maps stay uncolored.
    assignment = state.assignment if state.config.mode == "R" else None
    export.render_svg_map(
        state.map_graph, state.map_layout, assignment, out / "map.svg"
    )


# ---------------------------------------------------------------------------
# execution


def _load_manifest(out: Path) -> dict:
    path = out / _MANIFEST
    if path.exists():
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            return {}
    return {}


def _artifacts_exist(out: Path, stage: str) -> bool:
    return all((out / name).exists() for name in STAGE_ARTIFACTS[stage])


def run_stage(config: PipelineConfig, subcommand: str) -> RunResult:
    """Execute the pipeline prefix ending at ``subcommand``.

    Stages whose cache key matches the manifest (and whose artifact files
    exist) skip their file writes; in-memory products that later stages
    need are still rebuilt from the exact cached matrix, so cached and
    fresh runs produce identical bytes.
    """
    if subcommand not in PREFIXES:
        raise ConfigError(
            f"unknown subcommand {subcommand!r}; valid values: "
            + ", ".join(PREFIXES)
        )
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    keys = _stage_keys(config)
    manifest = _load_manifest(out)
    stage_info = manifest.get("stages", {})
    state = _State(config=config)
    statuses: dict[str, str] = {}

    for stage in PREFIXES[subcommand]:
        cached = (
            stage_info.get(stage, {}).get("key") == keys[stage]
            and _artifacts_exist(out, stage)
        )
        started = time.perf_counter()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if stage == "ingest":
                if cached:
                    _load_ingest(state, out)
                    state.documents_total = stage_info["ingest"].get("documents", state.matrix.n_docs)
                    state.pruned_documents = stage_info["ingest"].get("pruned", [])
                else:
                    _compute_ingest(state, out)
            elif stage == "terms":
                _prepare_selection(state)
                if not cached:
                    _compute_terms(state, out)
            elif stage == "cooc":
                if not cached:
                    _compute_cooc(state, out)
            elif stage == "factors":
                _compute_factors(state, out, write=not cached)
            elif stage == "map":
                _compute_map(state, out, write=not cached)
            elif stage == "render":
                if not cached:
                    _compute_render(state, out)
        if stage == "ingest" and cached:
            state.warnings[stage] = list(stage_info["ingest"].get("warnings", []))
        else:
            state.warnings[stage] = [str(w.message) for w in caught]
        statuses[stage] = "cached" if cached else "computed"
        entry = {"key": keys[stage], "warnings": state.warnings[stage]}
        if stage == "ingest":
            entry["documents"] = state.documents_total
            entry["pruned"] = state.pruned_documents
        stage_info[stage] = entry
        logger.info(
            "stage %s: %s (%.3fs)", stage, statuses[stage],
            time.perf_counter() - started,
        )

    manifest["stages"] = stage_info
    (out / _MANIFEST).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    report = _build_report(state, statuses)
    (out / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    artifacts = {"report.json": out / "report.json"}
    for stage in PREFIXES[subcommand]:
        for name in STAGE_ARTIFACTS[stage]:
            artifacts[name] = out / name
    return RunResult(out_dir=out, artifacts=artifacts, stages=statuses, report=report)


def run(config: PipelineConfig) -> RunResult:
    """Run every stage and produce the full artifact set."""
    return run_stage(config, "run")


def _build_report(state: _State, statuses: dict[str, str]) -> dict:
    config = state.config
    report: dict = {
        "config": config.as_dict(),
        "artifacts": sorted(
            name for stage in statuses for name in STAGE_ARTIFACTS[stage]
        ) + ["report.json"],
        "warnings": [w for stage in STAGE_ORDER for w in state.warnings.get(stage, [])],
    }
    if state.matrix is not None:
        report["corpus"] = {
            "documents": state.documents_total,
            "documents_after_pruning": state.matrix.n_docs,
            "pruned_documents": state.pruned_documents,
            "vocabulary": state.matrix.n_terms,
            "tokens": state.matrix.total,
        }
    if state.selected:
        report["selection"] = {
            "criterion": config.criterion,
            "selected": len(state.selected),
            "terms": state.selected,
        }
    if state.solution is not None:
        report["factors"] = {
            "retained": state.solution.n_factors,
            "rotated": state.solution.rotated,
            "rotation_sweeps": state.solution.rotation_sweeps,
            "rotation_converged": state.solution.rotation_converged,
        }
    if state.map_graph is not None:
        report["map"] = {
            "kind": config.map,
            "nodes": len(state.map_graph.nodes),
            "edges": len(state.map_graph.edges),
        }
    return report
