"""Multi-word term detection.

Three interchangeable strategies produce phrases that are rewritten into
the corpus as single "_"-joined tokens:

* statistical bigram scoring with a discounted count ratio, run in two
  passes (a strict pass for frequent bigrams, then a looser pass over the
  merged corpus so bigrams can combine into longer n-grams),
* TextRank keyword ranking over a word co-occurrence graph,
* RAKE stop-word-delimited candidate scoring.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .corpus import TokenizedCorpus
from .errors import UnknownTermError

PhraseSet = set[str]


def _underlying_words(token: str) -> int:
    return token.count("_") + 1


@dataclass
class CorpusCounts:
    """Unigram and adjacent-bigram counts over a tokenized corpus.

    Bigrams are ordered adjacent pairs and never span sentence boundaries.
    """

    unigram_count: dict[str, int] = field(default_factory=dict)
    bigram_count: dict[tuple[str, str], int] = field(default_factory=dict)
    total_tokens: int = 0
    n_sentences: int = 0

    @property
    def vocabulary_size(self) -> int:
        return len(self.unigram_count)


def count_corpus(corpus: Iterable[Sequence[str]]) -> CorpusCounts:
    unigrams: Counter[str] = Counter()
    bigrams: Counter[tuple[str, str]] = Counter()
    total = 0
    n_sentences = 0
    for sentence in corpus:
        n_sentences += 1
        total += len(sentence)
        unigrams.update(sentence)
        bigrams.update(zip(sentence, sentence[1:]))
    return CorpusCounts(dict(unigrams), dict(bigrams), total, n_sentences)


def score_bigram(counts: CorpusCounts, wi: str, wj: str, delta: float) -> float:
    """Discounted association score for the adjacent pair (wi, wj):

        (count(wi wj) - delta) * |vocabulary| / (count(wi) * count(wj))

    Negative whenever the pair was seen fewer than ``delta`` times, so such
    pairs can never clear a positive threshold.
    """
    ci = counts.unigram_count.get(wi)
    if ci is None:
        raise UnknownTermError(wi, "first operand")
    cj = counts.unigram_count.get(wj)
    if cj is None:
        raise UnknownTermError(wj, "second operand")
    cij = counts.bigram_count.get((wi, wj), 0)
    return (cij - delta) * counts.vocabulary_size / (ci * cj)


@dataclass(frozen=True)
class PhrasingConfig:
    """Knobs for two-pass statistical phrasing.

    threshold_pass1 is the strict first-pass threshold, threshold_pass2 the
    looser second-pass one; delta discounts raw pair counts.
    """

    delta: float = 2.0
    threshold_pass1: float = 5.0
    threshold_pass2: float = 2.5
    max_phrase_len: int = 4

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if not (self.threshold_pass1 >= self.threshold_pass2 > 0):
            raise ValueError("thresholds must satisfy pass1 >= pass2 > 0")
        if self.max_phrase_len < 2:
            raise ValueError("max_phrase_len must be >= 2")


def phrase_pass(
    corpus: Iterable[Sequence[str]],
    counts: CorpusCounts,
    threshold: float,
    delta: float,
    max_len: int = 4,
) -> TokenizedCorpus:
    """One greedy left-to-right merge pass.

    An adjacent pair is merged when its score strictly exceeds the threshold
    and the merged token stays within ``max_len`` underlying words. A token
    consumed by a merge cannot start another merge in the same pass.
    """
    out: TokenizedCorpus = []
    for sentence in corpus:
        merged: list[str] = []
        i = 0
        while i < len(sentence):
            if i + 1 < len(sentence):
                a, b = sentence[i], sentence[i + 1]
                if (_underlying_words(a) + _underlying_words(b) <= max_len
                        and score_bigram(counts, a, b, delta) > threshold):
                    merged.append(a + "_" + b)
                    i += 2
                    continue
            merged.append(sentence[i])
            i += 1
        out.append(merged)
    return out


def collect_phrases(corpus: Iterable[Sequence[str]]) -> PhraseSet:
    """All distinct "_"-joined tokens present in a corpus."""
    return {tok for sentence in corpus for tok in sentence if "_" in tok}


def phrase_two_pass(
    corpus: Iterable[Sequence[str]],
    config: PhrasingConfig = PhrasingConfig(),
) -> tuple[TokenizedCorpus, PhraseSet]:
    """Run the statistical phraser twice: a strict pass over the raw corpus,
    then a looser pass over its output with counts recomputed so merged
    tokens take part as single terms (which is what lets bigrams grow into
    3- and 4-grams)."""
    corpus = [list(s) for s in corpus]
    counts1 = count_corpus(corpus)
    pass1 = phrase_pass(corpus, counts1, config.threshold_pass1,
                        config.delta, config.max_phrase_len)
    counts2 = count_corpus(pass1)
    pass2 = phrase_pass(pass1, counts2, config.threshold_pass2,
                        config.delta, config.max_phrase_len)
    return pass2, collect_phrases(pass2)


def _chunk_run(run: list[str], max_len: int) -> list[tuple[str, ...]]:
    """Split a token run into left-to-right chunks of at most max_len."""
    return [tuple(run[i:i + max_len]) for i in range(0, len(run), max_len)]


def pagerank(
    neighbors: dict[str, set[str]],
    damping: float = 0.85,
    max_iter: int = 50,
    tol: float = 1e-6,
) -> dict[str, float]:
    """Plain power-iteration PageRank over an undirected graph.

    Dangling nodes spread their mass uniformly. Stops after ``max_iter``
    rounds or when the L1 change drops below ``tol``.
    """
    nodes = sorted(neighbors)
    n = len(nodes)
    if n == 0:
        return {}
    index = {node: i for i, node in enumerate(nodes)}
    src: list[int] = []
    dst: list[int] = []
    inv_deg = np.zeros(n)
    for node in nodes:
        i = index[node]
        deg = len(neighbors[node])
        if deg:
            inv_deg[i] = 1.0 / deg
        for other in neighbors[node]:
            src.append(i)
            dst.append(index[other])
    src_arr = np.asarray(src, dtype=np.intp)
    dst_arr = np.asarray(dst, dtype=np.intp)
    dangling = inv_deg == 0.0
    rank = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        spread = np.zeros(n)
        np.add.at(spread, dst_arr, rank[src_arr] * inv_deg[src_arr])
        spread += rank[dangling].sum() / n
        new_rank = (1.0 - damping) / n + damping * spread
        if np.abs(new_rank - rank).sum() < tol:
            rank = new_rank
            break
        rank = new_rank
    return {node: float(rank[index[node]]) for node in nodes}


def textrank_phrases(
    corpus: Iterable[Sequence[str]],
    cooccur_window: int = 3,
    keep_fraction: float = 1 / 3,
    max_phrase_len: int = 4,
    damping: float = 0.85,
    max_iter: int = 50,
    tol: float = 1e-6,
) -> PhraseSet:
    """TextRank keyphrases: rank words by PageRank over the co-occurrence
    graph (words within ``cooccur_window`` positions are linked), keep the
    top ``keep_fraction`` of them, and join adjacent kept words into
    phrases."""
    if cooccur_window < 2:
        raise ValueError("cooccur_window must be >= 2")
    if not (0.0 <= keep_fraction <= 1.0):
        raise ValueError("keep_fraction must lie in [0, 1]")
    corpus = [list(s) for s in corpus]
    neighbors: dict[str, set[str]] = defaultdict(set)
    for sentence in corpus:
        for i, word in enumerate(sentence):
            neighbors[word]  # ensure isolated words become nodes
            for j in range(i + 1, min(i + cooccur_window + 1, len(sentence))):
                if sentence[j] != word:
                    neighbors[word].add(sentence[j])
                    neighbors[sentence[j]].add(word)
    if not neighbors:
        return set()
    ranks = pagerank(dict(neighbors), damping, max_iter, tol)
    ordered = sorted(ranks, key=lambda w: (-ranks[w], w))
    kept = set(ordered[:int(keep_fraction * len(ordered))])
    phrases: PhraseSet = set()
    for sentence in corpus:
        run: list[str] = []
        for token in sentence + [""]:  # sentinel flushes the last run
            if token in kept:
                run.append(token)
                continue
            for chunk in _chunk_run(run, max_phrase_len):
                if len(chunk) >= 2:
                    phrases.add("_".join(chunk))
            run = []
    return phrases


def rake_phrases(
    corpus: Iterable[Sequence[str]],
    stopwords: set[str] | frozenset[str],
    max_phrase_len: int = 4,
) -> PhraseSet:
    """RAKE keyphrases.

    Candidates are maximal stop-word-free token runs. Each word scores
    degree/frequency over the candidate co-occurrence graph; a candidate
    scores the sum of its word scores. The top third of distinct candidates
    is kept, and those with at least two words become phrases.
    """
    candidates: list[tuple[str, ...]] = []
    for sentence in corpus:
        run: list[str] = []
        for token in list(sentence) + [""]:
            if token and token not in stopwords:
                run.append(token)
                continue
            candidates.extend(_chunk_run(run, max_phrase_len))
            run = []
    if not candidates:
        return set()
    freq: Counter[str] = Counter()
    degree: Counter[str] = Counter()
    for cand in candidates:
        for word in cand:
            freq[word] += 1
            degree[word] += len(cand)
    word_score = {w: degree[w] / freq[w] for w in freq}
    distinct = set(candidates)
    cand_score = {c: sum(word_score[w] for w in c) for c in distinct}
    n_keep = math.ceil(len(distinct) / 3)
    top = sorted(distinct, key=lambda c: (-cand_score[c], c))[:n_keep]
    return {"_".join(c) for c in top if len(c) >= 2}


def apply_phrase_set(
    corpus: Iterable[Sequence[str]], phrases: PhraseSet
) -> TokenizedCorpus:
    """Rewrite a corpus with a known phrase set: greedy leftmost
    longest-match replacement of token runs whose "_"-join is a phrase."""
    corpus = [list(s) for s in corpus]
    if not phrases:
        return corpus
    max_words = max(_underlying_words(p) for p in phrases)
    out: TokenizedCorpus = []
    for sentence in corpus:
        rewritten: list[str] = []
        i = 0
        n = len(sentence)
        while i < n:
            matched = False
            longest = min(max_words, n - i)
            for length in range(longest, 1, -1):
                joined = "_".join(sentence[i:i + length])
                if joined in phrases:
                    rewritten.append(joined)
                    i += length
                    matched = True
                    break
            if not matched:
                rewritten.append(sentence[i])
                i += 1
        out.append(rewritten)
    return out


def save_phrase_set(phrases: PhraseSet, path) -> None:
    """One phrase per line, sorted lexicographically."""
    with open(path, "w", encoding="utf-8") as fh:
        for phrase in sorted(phrases):
            fh.write(phrase + "\n")


def load_phrase_set(path) -> PhraseSet:
    with open(path, encoding="utf-8") as fh:
        return {line.strip() for line in fh if line.strip()}


class PhraseDetector(TransformerMixin, BaseEstimator):
    """Estimator facade over the three phrase strategies.

    fit() learns the phrase set from a tokenized corpus; transform() rewrites
    any corpus with it via longest-match replacement. For the statistical
    algorithm, fit_transform() on the training corpus returns the exact
    two-pass merge output (greedy pass semantics, not longest-match).
    """

    def __init__(
        self,
        algorithm: str = "stat",
        delta: float = 2.0,
        threshold_pass1: float = 5.0,
        threshold_pass2: float = 2.5,
        max_phrase_len: int = 4,
        cooccur_window: int = 3,
        keep_fraction: float = 1 / 3,
        stopwords: frozenset[str] | None = None,
    ):
        self.algorithm = algorithm
        self.delta = delta
        self.threshold_pass1 = threshold_pass1
        self.threshold_pass2 = threshold_pass2
        self.max_phrase_len = max_phrase_len
        self.cooccur_window = cooccur_window
        self.keep_fraction = keep_fraction
        self.stopwords = stopwords

    def _phrasing_config(self) -> PhrasingConfig:
        return PhrasingConfig(self.delta, self.threshold_pass1,
                              self.threshold_pass2, self.max_phrase_len)

    def fit(self, X: TokenizedCorpus, y=None) -> "PhraseDetector":
        self.fit_transform(X)
        return self

    def fit_transform(self, X: TokenizedCorpus, y=None) -> TokenizedCorpus:
        if self.algorithm == "stat":
            merged, phrases = phrase_two_pass(X, self._phrasing_config())
            self.phrases_ = phrases
            return merged
        if self.algorithm == "textrank":
            self.phrases_ = textrank_phrases(
                X, self.cooccur_window, self.keep_fraction, self.max_phrase_len)
        elif self.algorithm == "rake":
            if self.stopwords is None:
                from .denoise import load_bundled_stoplist
                stop = load_bundled_stoplist("english").terms
            else:
                stop = self.stopwords
            self.phrases_ = rake_phrases(X, stop, self.max_phrase_len)
        else:
            raise ValueError(f"unknown phrasing algorithm: {self.algorithm!r}")
        return self.transform(X)

    def transform(self, X: TokenizedCorpus) -> TokenizedCorpus:
        if not hasattr(self, "phrases_"):
            raise RuntimeError("PhraseDetector must be fitted before transform")
        return apply_phrase_set(X, self.phrases_)
