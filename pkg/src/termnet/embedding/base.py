"""Shared training types: hyperparameter config, the trained matrix pair,
frequency down-sampling, and the global co-occurrence table."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass

import numpy as np

from ..vocab import Vocabulary

_ALGORITHMS = ("skipgram", "glove")
_WEIGHTINGS = ("flat", "inverse_distance")
_PRECISIONS = {"float32": np.float32, "float64": np.float64}

#: Default learning rates applied when TrainConfig.learning_rate is None.
DEFAULT_LEARNING_RATE = {"skipgram": 0.025, "glove": 0.05}


@dataclass
class TrainConfig:
    """Every hyperparameter of a training run.

    learning_rate=None selects the per-algorithm default (0.025 for
    skipgram, 0.05 for glove). deterministic=True forces a single worker
    and a fixed iteration order, which makes equal seeds give bit-identical
    matrices.
    """

    algorithm: str = "skipgram"
    dim: int = 300
    window: int = 10
    downsample_d: float = 0.0039
    negatives: int = 5
    epochs: int = 5
    learning_rate: float | None = None
    min_count: int = 2
    seed: int = 1
    x_max: float = 100.0
    alpha_weight: float = 0.75
    cooccur_weighting: str = "inverse_distance"
    deterministic: bool = True
    workers: int = 1
    precision: str = "float32"

    def __post_init__(self):
        if self.algorithm not in _ALGORITHMS:
            raise ValueError(f"unknown algorithm: {self.algorithm!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if not (0.0 < self.downsample_d <= 1.0):
            raise ValueError("downsample_d must lie in (0, 1]")
        if self.algorithm == "skipgram" and self.negatives < 1:
            raise ValueError("negatives must be >= 1 for skipgram")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate is not None and self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.x_max <= 0:
            raise ValueError("x_max must be positive")
        if self.cooccur_weighting not in _WEIGHTINGS:
            raise ValueError(f"unknown weighting: {self.cooccur_weighting!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.precision not in _PRECISIONS:
            raise ValueError(f"precision must be one of {set(_PRECISIONS)}")

    @property
    def effective_learning_rate(self) -> float:
        if self.learning_rate is not None:
            return self.learning_rate
        return DEFAULT_LEARNING_RATE[self.algorithm]

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(_PRECISIONS[self.precision])

    @property
    def effective_workers(self) -> int:
        return 1 if self.deterministic else self.workers

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown train config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class EmbeddingMatrix:
    """The two learned parameter matrices of a trainer.

    input_vectors holds the per-term lookup vectors; output_vectors the
    context-side matrix. GloVe additionally carries its bias terms so its
    loss stays computable after training.
    """

    vocab: Vocabulary
    input_vectors: np.ndarray
    output_vectors: np.ndarray
    input_bias: np.ndarray | None = None
    output_bias: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.input_vectors.shape[1]

    def term_vectors(self, mode: str = "input") -> np.ndarray:
        """Final per-term vectors: "input" for skipgram, "sum" for glove."""
        if mode == "input":
            return self.input_vectors
        if mode == "sum":
            return self.input_vectors + self.output_vectors
        raise ValueError(f"unknown vector mode: {mode!r}")

    def check_finite(self) -> None:
        if not np.isfinite(self.input_vectors).all() \
                or not np.isfinite(self.output_vectors).all():
            raise FloatingPointError("non-finite value in embedding matrices")


def subsample_probability(f_i: float, d: float) -> float:
    """Probability of dropping a context occurrence of a term with corpus
    frequency ``f_i`` under down-sample threshold ``d``:

        p_i = 1 - sqrt(d / f_i)   for f_i > d, else 0

    The raw formula goes negative below the threshold, so it is clamped to
    zero there. Dropping applies to context positions only; target positions
    are never skipped.
    """
    if not (0.0 < f_i <= 1.0):
        raise ValueError(f"frequency must lie in (0, 1], got {f_i}")
    if not (0.0 < d <= 1.0):
        raise ValueError(f"down-sample threshold must lie in (0, 1], got {d}")
    if f_i <= d:
        return 0.0
    return 1.0 - math.sqrt(d / f_i)


class CooccurrenceTable:
    """Sparse, symmetrically accessible weighted co-occurrence counts."""

    def __init__(self, entries: dict[tuple[int, int], float] | None = None):
        self.entries: dict[tuple[int, int], float] = dict(entries or {})
        if any(x < 0 for x in self.entries.values()):
            raise ValueError("co-occurrence weights must be >= 0")

    def get(self, i: int, j: int) -> float:
        hit = self.entries.get((i, j))
        if hit is None:
            hit = self.entries.get((j, i), 0.0)
        return hit

    def __len__(self) -> int:
        return len(self.entries)

    def nonzero_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Entry arrays (i, j, x) in sorted key order, for deterministic
        iteration independent of dict insertion history."""
        keys = sorted(self.entries)
        i = np.array([k[0] for k in keys], dtype=np.int64)
        j = np.array([k[1] for k in keys], dtype=np.int64)
        x = np.array([self.entries[k] for k in keys], dtype=np.float64)
        return i, j, x


def build_cooccurrence(
    corpus: Iterable[Sequence[str]],
    vocab: Vocabulary,
    window: int,
    weighting: str = "inverse_distance",
) -> CooccurrenceTable:
    """Accumulate X[i, j] over every ordered pair within ``window`` positions
    of each other in a sentence; windows never cross sentences. Unknown
    tokens contribute nothing but still occupy their positions, so distances
    are measured over the raw sentence.

    flat weighting adds 1 per pair, inverse_distance adds 1/distance.
    """
    if weighting not in _WEIGHTINGS:
        raise ValueError(f"unknown weighting: {weighting!r}")
    inverse = weighting == "inverse_distance"
    entries: dict[tuple[int, int], float] = {}
    for sentence in corpus:
        ids = [vocab.entries[t].id if t in vocab else -1 for t in sentence]
        n = len(ids)
        for pos in range(n):
            ti = ids[pos]
            if ti < 0:
                continue
            for other in range(pos + 1, min(pos + window + 1, n)):
                tj = ids[other]
                if tj < 0:
                    continue
                w = 1.0 / (other - pos) if inverse else 1.0
                entries[(ti, tj)] = entries.get((ti, tj), 0.0) + w
                entries[(tj, ti)] = entries.get((tj, ti), 0.0) + w
    return CooccurrenceTable(entries)
