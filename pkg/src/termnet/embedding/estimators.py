"""Estimator facades over the two trainers.

Both fit a tokenized corpus and expose the learned vocabulary and vectors;
transform() maps term lists to vector rows so the models compose with
array-consuming pipelines.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from sklearn.base import BaseEstimator

from ..errors import UnknownTermError
from ..vocab import Vocabulary
from .base import EmbeddingMatrix, TrainConfig, build_cooccurrence
from .glove import train_glove
from .skipgram import train_skipgram


class _EmbeddingBase(BaseEstimator):
    _algorithm = ""
    _vector_mode = "input"

    def _config(self) -> TrainConfig:
        params = {k: v for k, v in self.get_params().items()
                  if k in TrainConfig.__dataclass_fields__}
        return TrainConfig(algorithm=self._algorithm, **params)

    def fit(self, X: Sequence[Sequence[str]], y=None):
        config = self._config()
        corpus = [list(s) for s in X]
        vocab = Vocabulary.from_corpus(corpus, config.min_count)
        corpus = [kept for kept in
                  ([t for t in s if t in vocab] for s in corpus) if kept]
        self.matrix_ = self._train(corpus, vocab, config)
        self.vocabulary_ = vocab
        self.vectors_ = np.asarray(
            self.matrix_.term_vectors(self._vector_mode))
        return self

    def _train(self, corpus, vocab, config) -> EmbeddingMatrix:
        raise NotImplementedError

    def transform(self, X: Sequence[str]) -> np.ndarray:
        if not hasattr(self, "vectors_"):
            raise RuntimeError("estimator must be fitted before transform")
        rows = np.empty((len(X), self.vectors_.shape[1]),
                        dtype=self.vectors_.dtype)
        for k, term in enumerate(X):
            if term not in self.vocabulary_:
                raise UnknownTermError(term)
            rows[k] = self.vectors_[self.vocabulary_.id_of(term)]
        return rows


class SkipgramEmbedding(_EmbeddingBase):
    _algorithm = "skipgram"
    _vector_mode = "input"

    def __init__(self, dim: int = 300, window: int = 10,
                 downsample_d: float = 0.0039, negatives: int = 5,
                 epochs: int = 5, learning_rate: float | None = None,
                 min_count: int = 2, seed: int = 1,
                 deterministic: bool = True, workers: int = 1,
                 precision: str = "float32"):
        self.dim = dim
        self.window = window
        self.downsample_d = downsample_d
        self.negatives = negatives
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.min_count = min_count
        self.seed = seed
        self.deterministic = deterministic
        self.workers = workers
        self.precision = precision

    def _train(self, corpus, vocab, config):
        return train_skipgram(corpus, vocab, config)


class GloveEmbedding(_EmbeddingBase):
    _algorithm = "glove"
    _vector_mode = "sum"

    def __init__(self, dim: int = 300, window: int = 10,
                 epochs: int = 5, learning_rate: float | None = None,
                 min_count: int = 2, seed: int = 1, x_max: float = 100.0,
                 alpha_weight: float = 0.75,
                 cooccur_weighting: str = "inverse_distance",
                 precision: str = "float32"):
        self.dim = dim
        self.window = window
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.min_count = min_count
        self.seed = seed
        self.x_max = x_max
        self.alpha_weight = alpha_weight
        self.cooccur_weighting = cooccur_weighting
        self.precision = precision

    def _train(self, corpus, vocab, config):
        table = build_cooccurrence(corpus, vocab, config.window,
                                   config.cooccur_weighting)
        return train_glove(table, vocab, config)
