"""The semantic network: an immutable term-vector store queried on demand.

Relevance between two terms is the cosine of their vectors; everything
else (neighbor ranking, text-to-subgraph adjacency, tree expansion, random
pair statistics) is built on that single definition. Pairwise links are
never materialized.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import normalize
from .denoise import load_bundled_stoplist
from .errors import DegenerateVectorError, UnknownTermError
from . import embedding as _emb


def canonical_term(term: str) -> str:
    """Map user input to vocabulary form: trimmed, lowercased, internal
    whitespace joined with "_"."""
    return "_".join(term.strip().lower().split())


@dataclass
class ConceptNode:
    term: str
    relevance: float | None
    children: list["ConceptNode"] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict = {"term": self.term}
        if self.relevance is not None:
            out["relevance"] = self.relevance
        out["children"] = [child.to_dict() for child in self.children]
        return out


@dataclass
class ConceptTree:
    root: ConceptNode
    breadth: int
    depth: int

    def all_terms(self) -> list[str]:
        terms: list[str] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            terms.append(node.term)
            stack.extend(reversed(node.children))
        return terms

    def to_dict(self) -> dict:
        return self.root.to_dict()


@dataclass(frozen=True)
class RelevanceDistribution:
    n_pairs: int
    mean: float
    stddev: float
    histogram: list[int]
    bin_edges: list[float]


class EmbeddingStore:
    """Read-only term vectors with cached norms.

    Norms are computed lazily per term so that a memory-mapped store can
    answer pairwise queries without touching the whole matrix; full-scan
    queries (neighbors, sampling) materialize the rest on first use.
    Zero-norm vectors are flagged and excluded from similarity queries.
    """

    def __init__(self, terms: Sequence[str], vectors: np.ndarray,
                 metadata: dict | None = None):
        if len(terms) != vectors.shape[0]:
            raise ValueError("term list and vector matrix disagree")
        if len(set(terms)) != len(terms):
            raise ValueError("duplicate terms in store")
        self.terms = list(terms)
        self.vectors = vectors
        self.metadata = metadata or {}
        self._row = {t: k for k, t in enumerate(self.terms)}
        self._norms = np.full(len(self.terms), np.nan)
        self._all_norms_ready = False
        self._lex_rank: np.ndarray | None = None
        self._max_words: int | None = None

    # -- construction ----------------------------------------------------

    @classmethod
    def load(cls, path: str | Path, on_demand: bool = False) -> "EmbeddingStore":
        """Open a binary model. With on_demand=True the matrix is
        memory-mapped through the sidecar and vectors are paged in as
        queries touch them."""
        if on_demand:
            terms, vectors, metadata = _emb.open_mapped(path)
            return cls(terms, vectors, metadata)
        terms, vectors = _emb.load_binary(path)
        metadata = None
        try:
            metadata = _emb.load_sidecar(path).get("metadata")
        except (FileNotFoundError, ValueError):
            pass
        return cls(terms, vectors, metadata)

    @classmethod
    def from_matrix(cls, matrix: "_emb.EmbeddingMatrix", mode: str = "input",
                    metadata: dict | None = None) -> "EmbeddingStore":
        return cls(matrix.vocab.id_to_term,
                   np.asarray(matrix.term_vectors(mode), dtype=np.float32),
                   metadata)

    def save(self, path: str | Path) -> None:
        _emb.save_binary(path, self.terms,
                         np.asarray(self.vectors, dtype=np.float32),
                         self.metadata or None)

    # -- lookups ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __contains__(self, term: str) -> bool:
        return canonical_term(term) in self._row

    def row_of(self, term: str) -> int:
        canonical = canonical_term(term)
        row = self._row.get(canonical)
        if row is None:
            raise UnknownTermError(canonical)
        return row

    def vector(self, term: str) -> np.ndarray:
        return np.asarray(self.vectors[self.row_of(term)])

    def _norm(self, row: int) -> float:
        value = self._norms[row]
        if np.isnan(value):
            value = float(np.linalg.norm(
                np.asarray(self.vectors[row], dtype=np.float64)))
            self._norms[row] = value
        return value

    def _ensure_all_norms(self) -> None:
        # row-by-row, with the exact arithmetic _norm() uses: a batched
        # axis-norm can differ in the last ulp and would make cached values
        # depend on which query touched a row first
        if not self._all_norms_ready:
            for row in range(len(self.terms)):
                if np.isnan(self._norms[row]):
                    self._norm(row)
            self._all_norms_ready = True

    def _lexicographic_rank(self) -> np.ndarray:
        if self._lex_rank is None:
            order = sorted(range(len(self.terms)),
                           key=self.terms.__getitem__)
            rank = np.empty(len(self.terms), dtype=np.int64)
            for position, row in enumerate(order):
                rank[row] = position
            self._lex_rank = rank
        return self._lex_rank

    # -- queries ---------------------------------------------------------

    def relevance(self, a: str, b: str) -> float:
        """Cosine similarity of two stored terms, in [-1, 1]."""
        ra, rb = self.row_of(a), self.row_of(b)
        na, nb = self._norm(ra), self._norm(rb)
        if na == 0.0:
            raise DegenerateVectorError(canonical_term(a))
        if nb == 0.0:
            raise DegenerateVectorError(canonical_term(b))
        va = np.asarray(self.vectors[ra], dtype=np.float64)
        vb = np.asarray(self.vectors[rb], dtype=np.float64)
        return float(np.clip(va @ vb / (na * nb), -1.0, 1.0))

    def top_k(self, term: str, k: int, exclude: Iterable[str] | None = None
              ) -> list[tuple[str, float]]:
        """The k most relevant terms, descending, ties broken by ascending
        term order. The query term and the exclude set never appear."""
        if k < 1:
            raise ValueError("k must be >= 1")
        row = self.row_of(term)
        self._ensure_all_norms()
        nq = self._norms[row]
        if nq == 0.0:
            raise DegenerateVectorError(canonical_term(term))
        dense = np.asarray(self.vectors, dtype=np.float64)
        scores = dense @ dense[row]
        valid = self._norms > 0.0
        scores[valid] /= self._norms[valid] * nq
        np.clip(scores, -1.0, 1.0, out=scores)
        valid[row] = False
        if exclude:
            for other in exclude:
                hit = self._row.get(canonical_term(other))
                if hit is not None:
                    valid[hit] = False
        candidates = np.flatnonzero(valid)
        if candidates.size == 0:
            return []
        order = np.lexsort((self._lexicographic_rank()[candidates],
                            -scores[candidates]))
        picked = candidates[order[:k]]
        # report values through the same per-pair arithmetic as relevance(),
        # so neighbor scores agree with pairwise queries bit for bit
        q = dense[row]
        result = []
        for r in picked:
            value = float(np.clip(dense[r] @ q / (self._norms[r] * nq),
                                  -1.0, 1.0))
            result.append((self.terms[r], value))
        result.sort(key=lambda pair: (-pair[1], pair[0]))
        return result

    def subgraph_adjacency(
        self,
        text: str,
        stopwords: frozenset[str] | set[str] | None = None,
    ) -> tuple[list[str], np.ndarray]:
        """Extract the store terms appearing in free text and their full
        relevance matrix.

        The text is normalized, runs of tokens are greedily matched
        longest-first against the store vocabulary (so multi-word terms are
        recognized), then stop-words and unknown tokens are removed. The
        distinct surviving terms in first-appearance order form the axis.
        """
        if stopwords is None:
            stopwords = load_bundled_stoplist("english").terms
        tokens = normalize(text)
        max_words = self._max_phrase_words()
        matched: list[str] = []
        i = 0
        while i < len(tokens):
            hit = None
            for length in range(min(max_words, len(tokens) - i), 0, -1):
                joined = "_".join(tokens[i:i + length])
                if joined in self._row:
                    hit = joined
                    i += length
                    break
            if hit is None:
                i += 1
                continue
            matched.append(hit)
        seen: set[str] = set()
        axis: list[str] = []
        for term in matched:
            if term in stopwords or term in seen:
                continue
            if self._norm(self._row[term]) == 0.0:
                continue
            seen.add(term)
            axis.append(term)
        n = len(axis)
        matrix = np.eye(n)
        for a in range(n):
            for b in range(a + 1, n):
                value = self.relevance(axis[a], axis[b])
                matrix[a, b] = value
                matrix[b, a] = value
        return axis, matrix

    def _max_phrase_words(self) -> int:
        if self._max_words is None:
            self._max_words = max(
                (term.count("_") + 1 for term in self.terms), default=1)
        return self._max_words

    def expand_tree(self, root: str, breadth: int, depth: int) -> ConceptTree:
        """Breadth-first neighbor expansion from a root term.

        Each node gets up to ``breadth`` children: its most relevant terms
        excluding everything already placed anywhere in the tree, so no term
        appears twice tree-wide.
        """
        if breadth < 1:
            raise ValueError("breadth must be >= 1")
        if depth < 0:
            raise ValueError("depth must be >= 0")
        root_term = self.terms[self.row_of(root)]
        root_node = ConceptNode(root_term, None)
        placed = {root_term}
        frontier = [root_node]
        for _ in range(depth):
            next_frontier: list[ConceptNode] = []
            for node in frontier:
                for child_term, value in self.top_k(node.term, breadth,
                                                    exclude=placed):
                    child = ConceptNode(child_term, value)
                    node.children.append(child)
                    placed.add(child_term)
                    next_frontier.append(child)
            frontier = next_frontier
            if not frontier:
                break
        return ConceptTree(root_node, breadth, depth)

    def sample_relevance_distribution(
        self, n_pairs: int, seed: int = 0, bins: int = 100
    ) -> RelevanceDistribution:
        """Relevance statistics over seeded uniform random distinct-term
        pairs, with a histogram over [-1, 1]."""
        if len(self) < 2:
            raise ValueError("need at least two terms to sample pairs")
        if n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")
        self._ensure_all_norms()
        valid = np.flatnonzero(self._norms > 0.0)
        if valid.size < 2:
            raise ValueError("need at least two nonzero-norm vectors")
        rng = np.random.default_rng(seed)
        a_pos = rng.integers(0, valid.size, size=n_pairs)
        b_pos = rng.integers(0, valid.size - 1, size=n_pairs)
        b_pos += b_pos >= a_pos  # uniform over distinct ordered pairs
        first = valid[a_pos]
        second = valid[b_pos]
        dense = np.asarray(self.vectors, dtype=np.float64)
        values = (dense[first] * dense[second]).sum(axis=1)
        values /= self._norms[first] * self._norms[second]
        np.clip(values, -1.0, 1.0, out=values)
        counts, edges = np.histogram(values, bins=bins, range=(-1.0, 1.0))
        return RelevanceDistribution(
            n_pairs=n_pairs,
            mean=float(values.mean()),
            stddev=float(values.std()),
            histogram=counts.tolist(),
            bin_edges=edges.tolist(),
        )


def adjacency_to_csv(terms: Sequence[str], matrix: np.ndarray) -> str:
    """CSV with a header row and column of terms; cells carry 6 decimals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(terms))
    for term, row in zip(terms, np.asarray(matrix)):
        writer.writerow([term] + [f"{value:.6f}" for value in row])
    return buf.getvalue()


def adjacency_from_csv(text: str) -> tuple[list[str], np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return [], np.zeros((0, 0))
    terms = rows[0][1:]
    matrix = np.array([[float(cell) for cell in row[1:]] for row in rows[1:]])
    if len(terms) == 0:
        matrix = np.zeros((0, 0))
    return terms, matrix
