"""Evaluation protocols: dictionary term coverage, rank correlation of
model relevance against human-rated term pairs, and Cronbach's alpha for
inter-rater reliability."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import normalize
from .denoise import Lemmatizer
from .errors import (
    DegenerateVectorError,
    InsufficientOverlapError,
    UndefinedCorrelationError,
    UnknownTermError,
)
from .semnet import EmbeddingStore
from .vocab import Vocabulary


@dataclass(frozen=True)
class CategorizedDictionary:
    """Reference keywords grouped by category; duplicates across categories
    count once per category."""

    categories: dict[str, frozenset[str]]

    @property
    def total_keywords(self) -> int:
        return sum(len(kw) for kw in self.categories.values())

    @classmethod
    def load(cls, path: str | Path) -> "CategorizedDictionary":
        """Dictionary file: "category<TAB>keyword" per line."""
        grouped: dict[str, set[str]] = {}
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                if "\t" not in line:
                    raise ValueError(f"line {line_no}: expected category<TAB>keyword")
                category, keyword = line.split("\t", 1)
                grouped.setdefault(category.strip(), set()).add(
                    keyword.strip().lower())
        return cls({cat: frozenset(kw) for cat, kw in grouped.items()})


@dataclass(frozen=True)
class RatedPair:
    term_a: str
    term_b: str
    score: float


@dataclass(frozen=True)
class RatedPairSet:
    pairs: tuple[RatedPair, ...]
    scale: tuple[float, float] = (0.0, 10.0)

    def __post_init__(self):
        lo, hi = self.scale
        seen: set[frozenset[str]] = set()
        for pair in self.pairs:
            if not (lo <= pair.score <= hi):
                raise ValueError(
                    f"score {pair.score} outside declared scale [{lo}, {hi}]")
            key = frozenset((pair.term_a, pair.term_b))
            if key in seen:
                raise ValueError(
                    f"duplicate pair: {pair.term_a!r} / {pair.term_b!r}")
            seen.add(key)

    @classmethod
    def load(cls, path: str | Path,
             scale: tuple[float, float] = (0.0, 10.0)) -> "RatedPairSet":
        """Rated-pair file: "term_a<TAB>term_b<TAB>score" per line."""
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 3:
                    raise ValueError(f"line {line_no}: expected 3 tab-separated columns")
                pairs.append(RatedPair(cols[0].strip(), cols[1].strip(),
                                       float(cols[2])))
        return cls(tuple(pairs), scale)


def normalize_query_term(term: str, lemmatizer: Lemmatizer | None = None) -> str:
    """Apply the pipeline's own normalization to a benchmark keyword:
    tokenize, join with "_", lemmatize the final word."""
    lemmatizer = lemmatizer or Lemmatizer()
    tokens = normalize(term)
    if not tokens:
        return ""
    return lemmatizer.lemmatize("_".join(tokens))


@dataclass(frozen=True)
class CoverageReport:
    per_category: dict[str, float]
    per_category_counts: dict[str, tuple[int, int]]
    total: float
    n_retrieved: int
    n_keywords: int


def term_coverage(
    vocab: Vocabulary,
    dictionary: CategorizedDictionary,
    lemmatizer: Lemmatizer | None = None,
) -> CoverageReport:
    """Fraction of dictionary keywords retrievable from a vocabulary,
    per category and overall. A keyword counts as retrieved when its
    pipeline-normalized form is a vocabulary key."""
    if not dictionary.categories or dictionary.total_keywords == 0:
        raise ValueError("dictionary has no keywords")
    lemmatizer = lemmatizer or Lemmatizer()
    per_category: dict[str, float] = {}
    per_counts: dict[str, tuple[int, int]] = {}
    hits_total = 0
    for category, keywords in sorted(dictionary.categories.items()):
        hits = sum(
            1 for kw in keywords
            if normalize_query_term(kw, lemmatizer) in vocab
        )
        per_category[category] = hits / len(keywords) if keywords else 0.0
        per_counts[category] = (hits, len(keywords))
        hits_total += hits
    return CoverageReport(
        per_category=per_category,
        per_category_counts=per_counts,
        total=hits_total / dictionary.total_keywords,
        n_retrieved=hits_total,
        n_keywords=dictionary.total_keywords,
    )


def fractional_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties averaged."""
    a = np.asarray(values, dtype=np.float64)
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(len(a), dtype=np.float64)
    i = 0
    n = len(a)
    while i < n:
        j = i
        while j + 1 < n and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation: Pearson correlation of fractional ranks
    with average-rank tie handling."""
    if len(x) != len(y):
        raise ValueError("x and y must have equal length")
    if len(x) < 2:
        raise ValueError("need at least 2 observations")
    rx = fractional_ranks(x)
    ry = fractional_ranks(y)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise UndefinedCorrelationError(
            "rank correlation undefined: an argument has zero rank variance")
    return float(dx @ dy / math.sqrt(sx * sy))


def cronbach_alpha(ratings: np.ndarray | Sequence[Sequence[float]]) -> float:
    """Cronbach's alpha with raters as the scale components.

    ``ratings`` is a complete raters x items grid. Variances use the sample
    (n-1) estimator; the total is the variance of per-item rater sums.
    """
    grid = np.asarray(ratings, dtype=np.float64)
    if grid.ndim != 2:
        raise ValueError("ratings must be a 2-D raters x items grid")
    k, n_items = grid.shape
    if k < 2 or n_items < 2:
        raise ValueError("need at least 2 raters and 2 items")
    if not np.isfinite(grid).all():
        raise ValueError("ratings grid must be complete and finite")
    rater_vars = grid.var(axis=1, ddof=1)
    sums = grid.sum(axis=0)
    total_var = float(np.var(sums, ddof=1))
    if total_var == 0.0:
        raise ValueError("alpha undefined: rating sums have zero variance")
    return float(k / (k - 1) * (1.0 - rater_vars.sum() / total_var))


def load_ratings_matrix(path: str | Path) -> np.ndarray:
    """Ratings CSV: one row per rater, one numeric column per item."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(cell) for cell in line.split(",")])
    if not rows:
        raise ValueError(f"no ratings found in {path}")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError("ratings matrix rows have unequal lengths")
    return np.asarray(rows, dtype=np.float64)


@dataclass(frozen=True)
class BenchmarkResult:
    rho: float
    n_scored: int
    n_missing: int


def benchmark_correlation(
    store: EmbeddingStore,
    bench: RatedPairSet,
    lemmatizer: Lemmatizer | None = None,
) -> BenchmarkResult:
    """Spearman correlation of store relevance against human scores over
    the pairs whose terms both resolve in the store; unresolved pairs are
    counted and excluded."""
    lemmatizer = lemmatizer or Lemmatizer()
    model_scores: list[float] = []
    human_scores: list[float] = []
    n_missing = 0
    for pair in bench.pairs:
        a = normalize_query_term(pair.term_a, lemmatizer)
        b = normalize_query_term(pair.term_b, lemmatizer)
        try:
            value = store.relevance(a, b)
        except (UnknownTermError, DegenerateVectorError):
            n_missing += 1
            continue
        model_scores.append(value)
        human_scores.append(pair.score)
    if len(model_scores) < 2:
        raise InsufficientOverlapError(
            f"only {len(model_scores)} of {len(bench.pairs)} pairs resolved "
            "in the store; need at least 2")
    rho = spearman(model_scores, human_scores)
    return BenchmarkResult(rho, len(model_scores), n_missing)
