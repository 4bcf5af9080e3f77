"""Skip-gram trainer with negative sampling.

For every target position the model contrasts each surviving in-window
context token against noise tokens drawn from the unigram^(3/4)
distribution. Frequent tokens are dropped from context windows with the
down-sampling probability, but every position is always visited as a
target. The effective window per target is uniform in [1, window].
"""

from __future__ import annotations

import concurrent.futures
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import UnknownTermError
from ..vocab import Vocabulary
from .base import EmbeddingMatrix, TrainConfig, subsample_probability

_NOISE_POWER = 0.75
_MAX_REDRAWS = 100


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def skipgram_loss(v_center: np.ndarray, u_rows: np.ndarray) -> float:
    """Negative-sampling loss for one step; row 0 of ``u_rows`` is the true
    context, the remaining rows are noise tokens:

        -log sigmoid(u_ctx . v) - sum_neg log sigmoid(-u_neg . v)
    """
    scores = (u_rows @ v_center).astype(np.float64)
    loss = np.logaddexp(0.0, -scores[0]) + np.logaddexp(0.0, scores[1:]).sum()
    return float(loss)


def skipgram_gradients(
    v_center: np.ndarray, u_rows: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Loss plus analytic gradients w.r.t. the center vector and each row."""
    scores = u_rows @ v_center
    g = _sigmoid(scores)
    g[0] -= 1.0  # d loss / d score; positive row has label 1
    grad_v = g @ u_rows
    grad_u = np.outer(g, v_center)
    return skipgram_loss(v_center, u_rows), grad_v, grad_u


def _step(
    w_in: np.ndarray,
    w_out: np.ndarray,
    center: int,
    rows: np.ndarray,
    lr: float,
) -> float:
    v = w_in[center]
    u = w_out[rows]
    loss, grad_v, grad_u = skipgram_gradients(v, u)
    # duplicate noise rows must accumulate, so no plain fancy-index store
    np.subtract.at(w_out, rows, (lr * grad_u).astype(w_out.dtype))
    w_in[center] = v - (lr * grad_v).astype(w_in.dtype)
    return loss


def skipgram_step(
    model: EmbeddingMatrix,
    center: int,
    context: int,
    negatives: Sequence[int],
    lr: float,
) -> float:
    """One stochastic update against (center, context) with the given noise
    tokens; returns the loss before the update. The caller guarantees that
    no negative equals the context id."""
    if context in negatives:
        raise ValueError("negatives must exclude the context id")
    rows = np.concatenate(([context], np.asarray(negatives, dtype=np.int64)))
    return _step(model.input_vectors, model.output_vectors, center, rows, lr)


def skipgram_initial_matrix(vocab: Vocabulary, config: TrainConfig) -> EmbeddingMatrix:
    """Seeded start state: input vectors uniform in [-0.5/dim, 0.5/dim],
    output vectors zero."""
    rng = np.random.default_rng(config.seed)
    size = (len(vocab), config.dim)
    w_in = ((rng.random(size) - 0.5) / config.dim).astype(config.dtype)
    w_out = np.zeros(size, dtype=config.dtype)
    return EmbeddingMatrix(vocab, w_in, w_out)


@dataclass
class TrainStats:
    """Optional instrumentation filled in by the trainer."""

    target_positions: int = 0
    steps: int = 0
    loss_sum: float = 0.0


def _encode_corpus(corpus, vocab: Vocabulary) -> list[np.ndarray]:
    sentences = []
    for sentence in corpus:
        ids = np.empty(len(sentence), dtype=np.int64)
        for k, token in enumerate(sentence):
            entry = vocab.entries.get(token)
            if entry is None:
                raise UnknownTermError(token, "corpus token missing from vocabulary")
            ids[k] = entry.id
        sentences.append(ids)
    return sentences


def _noise_cdf(vocab: Vocabulary) -> np.ndarray:
    weights = np.array(vocab.counts_by_id(), dtype=np.float64) ** _NOISE_POWER
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0
    return cdf


def _train_shard(
    w_in: np.ndarray,
    w_out: np.ndarray,
    sentences: list[np.ndarray],
    drop_p: np.ndarray,
    noise_cdf: np.ndarray,
    config: TrainConfig,
    rng: np.random.Generator,
    progress: list[int],
    total_steps: int,
    check_every: int,
    stats: TrainStats | None,
) -> None:
    lr_max = config.effective_learning_rate
    lr_min = lr_max / 100.0
    n_neg = config.negatives
    window = config.window
    for ids in sentences:
        n = len(ids)
        if n == 0:
            continue
        b = rng.integers(1, window + 1, size=n)
        pairs: list[tuple[int, int]] = []
        for t in range(n):
            lo = max(0, t - int(b[t]))
            hi = min(n, t + int(b[t]) + 1)
            for c in range(lo, hi):
                if c != t:
                    pairs.append((t, c))
        coins = rng.random(len(pairs))
        survive = [k for k, (t, c) in enumerate(pairs)
                   if coins[k] >= drop_p[ids[c]]]
        if survive:
            draws = rng.random((len(survive), n_neg))
            negs = np.searchsorted(noise_cdf, draws, side="right")
        k = 0
        s = 0
        for t in range(n):
            done = progress[0]
            progress[0] = done + 1
            lr = lr_max - (lr_max - lr_min) * (done / total_steps)
            if stats is not None:
                stats.target_positions += 1
            while k < len(pairs) and pairs[k][0] == t:
                c = pairs[k][1]
                if coins[k] >= drop_p[ids[c]]:
                    row_negs = negs[s]
                    s += 1
                    ctx = ids[c]
                    for m in range(n_neg):
                        attempts = 0
                        while row_negs[m] == ctx:
                            row_negs[m] = np.searchsorted(
                                noise_cdf, rng.random(), side="right")
                            attempts += 1
                            if attempts >= _MAX_REDRAWS:
                                row_negs[m] = (ctx + 1) % len(noise_cdf)
                                break
                    rows = np.concatenate(([ctx], row_negs))
                    loss = _step(w_in, w_out, int(ids[t]), rows, lr)
                    if stats is not None:
                        stats.steps += 1
                        stats.loss_sum += loss
                k += 1
            if progress[0] % check_every == 0:
                if not np.isfinite(w_in).all() or not np.isfinite(w_out).all():
                    raise FloatingPointError("non-finite value during training")


def train_skipgram(
    corpus: Sequence[Sequence[str]],
    vocab: Vocabulary,
    config: TrainConfig,
    stats: TrainStats | None = None,
) -> EmbeddingMatrix:
    """Train skip-gram vectors over an encoded corpus.

    The learning rate decays linearly from its starting value to 1/100 of
    it across all target positions of all epochs. All randomness derives
    from config.seed; with deterministic=True two runs produce bit-identical
    matrices.
    """
    if config.algorithm != "skipgram":
        raise ValueError("config.algorithm must be 'skipgram'")
    if len(vocab) == 0:
        raise ValueError("cannot train on an empty vocabulary")
    if len(vocab) < config.negatives + 2:
        raise ValueError(
            f"vocabulary of {len(vocab)} terms is too small to sample "
            f"{config.negatives} negatives")
    sentences = _encode_corpus(corpus, vocab)
    matrix = skipgram_initial_matrix(vocab, config)
    total_positions = sum(len(s) for s in sentences)
    if config.epochs == 0 or total_positions == 0:
        return matrix

    drop_p = np.array([subsample_probability(f, config.downsample_d)
                       for f in vocab.frequencies_by_id()])
    noise_cdf = _noise_cdf(vocab)
    total_steps = config.epochs * total_positions
    check_every = max(1, total_steps // 10)
    workers = config.effective_workers
    progress = [0]

    if workers == 1:
        rng = np.random.default_rng(config.seed)
        for _ in range(config.epochs):
            _train_shard(matrix.input_vectors, matrix.output_vectors,
                         sentences, drop_p, noise_cdf, config, rng,
                         progress, total_steps, check_every, stats)
    else:
        # hogwild mode: shards share the matrices without locking; races
        # are tolerated and results are not deterministic
        shards = [sentences[w::workers] for w in range(workers)]
        for epoch in range(config.epochs):
            with concurrent.futures.ThreadPoolExecutor(workers) as pool:
                futures = [
                    pool.submit(
                        _train_shard, matrix.input_vectors,
                        matrix.output_vectors, shard, drop_p, noise_cdf,
                        config, np.random.default_rng([config.seed, epoch, w]),
                        progress, total_steps, check_every, stats)
                    for w, shard in enumerate(shards)
                ]
                for fut in futures:
                    fut.result()
    matrix.check_finite()
    return matrix
