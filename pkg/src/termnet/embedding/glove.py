"""GloVe trainer: weighted least squares on log co-occurrence counts.

Minimizes  sum_ij f(X_ij) (w_i . u_j + b_i + c_j - log X_ij)^2  with
f(x) = (x / x_max)^alpha below x_max and 1 above, by AdaGrad over the
nonzero entries in a fresh shuffled order each epoch. The published vector
of a term is the sum of its two learned vectors.
"""

from __future__ import annotations

import numpy as np

from ..vocab import Vocabulary
from .base import CooccurrenceTable, EmbeddingMatrix, TrainConfig


def glove_weight(x: float | np.ndarray, x_max: float, alpha: float) -> np.ndarray:
    """The loss weighting f(x); continuous at x_max and capped at 1."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < x_max, (x / x_max) ** alpha, 1.0)


def glove_entry_loss(
    v_i: np.ndarray, u_j: np.ndarray, b_i: float, c_j: float,
    x: float, x_max: float, alpha: float,
) -> float:
    diff = float(v_i @ u_j) + b_i + c_j - np.log(x)
    return float(glove_weight(x, x_max, alpha)) * diff * diff


def glove_entry_gradients(
    v_i: np.ndarray, u_j: np.ndarray, b_i: float, c_j: float,
    x: float, x_max: float, alpha: float,
) -> tuple[float, np.ndarray, np.ndarray, float, float]:
    """Loss and analytic gradients (d/dv_i, d/du_j, d/db_i, d/dc_j) for a
    single nonzero entry."""
    fx = float(glove_weight(x, x_max, alpha))
    diff = float(v_i @ u_j) + b_i + c_j - float(np.log(x))
    g = 2.0 * fx * diff
    return fx * diff * diff, g * u_j, g * v_i, g, g


def glove_initial_matrix(vocab: Vocabulary, config: TrainConfig) -> EmbeddingMatrix:
    """Seeded start state: both matrices and both bias vectors uniform in
    [-0.5/dim, 0.5/dim]."""
    rng = np.random.default_rng(config.seed)
    size = (len(vocab), config.dim)
    scale = 1.0 / config.dim

    def uniform(shape):
        return ((rng.random(shape) - 0.5) * scale).astype(config.dtype)

    return EmbeddingMatrix(
        vocab,
        input_vectors=uniform(size),
        output_vectors=uniform(size),
        input_bias=uniform(len(vocab)),
        output_bias=uniform(len(vocab)),
    )


def glove_total_loss(
    table: CooccurrenceTable,
    matrix: EmbeddingMatrix,
    x_max: float = 100.0,
    alpha: float = 0.75,
) -> float:
    """Total weighted squared error of a matrix against a table."""
    if matrix.input_bias is None or matrix.output_bias is None:
        raise ValueError("matrix is missing glove bias terms")
    i, j, x = table.nonzero_arrays()
    w = matrix.input_vectors.astype(np.float64)
    u = matrix.output_vectors.astype(np.float64)
    diff = ((w[i] * u[j]).sum(axis=1)
            + matrix.input_bias.astype(np.float64)[i]
            + matrix.output_bias.astype(np.float64)[j]
            - np.log(x))
    return float((glove_weight(x, x_max, alpha) * diff * diff).sum())


def train_glove(
    table: CooccurrenceTable,
    vocab: Vocabulary,
    config: TrainConfig,
) -> EmbeddingMatrix:
    """Fit glove vectors to a co-occurrence table.

    AdaGrad accumulators start at 1. Entry order is reshuffled per epoch
    from config.seed, so equal seeds give bit-identical results.
    """
    if config.algorithm != "glove":
        raise ValueError("config.algorithm must be 'glove'")
    if len(table) == 0:
        raise ValueError("cannot train glove on an empty co-occurrence table")
    matrix = glove_initial_matrix(vocab, config)
    if config.epochs == 0:
        return matrix

    idx_i, idx_j, xs = table.nonzero_arrays()
    if (xs <= 0).any():
        raise ValueError("co-occurrence entries must be positive")
    n = len(xs)
    log_x = np.log(xs)
    fx = glove_weight(xs, config.x_max, config.alpha_weight)
    lr = config.effective_learning_rate
    dtype = config.dtype

    w = matrix.input_vectors
    u = matrix.output_vectors
    b = matrix.input_bias
    c = matrix.output_bias
    gsq_w = np.ones_like(w)
    gsq_u = np.ones_like(u)
    gsq_b = np.ones_like(b)
    gsq_c = np.ones_like(c)

    rng = np.random.default_rng([config.seed, 7])
    check_every = max(1, (config.epochs * n) // 10)
    done = 0
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for k in order:
            i = idx_i[k]
            j = idx_j[k]
            wi = w[i].copy()
            uj = u[j]
            diff = dtype.type(wi @ uj + b[i] + c[j] - log_x[k])
            g = dtype.type(2.0 * fx[k]) * diff
            grad_w = g * uj
            grad_u = g * wi
            w[i] -= lr * grad_w / np.sqrt(gsq_w[i])
            u[j] -= lr * grad_u / np.sqrt(gsq_u[j])
            b[i] -= lr * g / np.sqrt(gsq_b[i])
            c[j] -= lr * g / np.sqrt(gsq_c[j])
            gsq_w[i] += grad_w * grad_w
            gsq_u[j] += grad_u * grad_u
            gsq_b[i] += g * g
            gsq_c[j] += g * g
            done += 1
            if done % check_every == 0:
                matrix.check_finite()
    matrix.check_finite()
    return matrix
