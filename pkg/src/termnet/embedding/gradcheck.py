"""Finite-difference verification of the trainers' analytic gradients.

Runs entirely in float64. Each trial draws a small random configuration,
compares the analytic gradient against central differences of the loss,
and reports the worst norm-relative error seen.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .glove import glove_entry_gradients, glove_entry_loss
from .skipgram import skipgram_gradients, skipgram_loss

_H = 1e-5


@dataclass(frozen=True)
class GradientCheckReport:
    model_kind: str
    trials: int
    max_rel_error: float


def _rel_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    denom = np.linalg.norm(analytic) + np.linalg.norm(numeric) + 1e-12
    return float(np.linalg.norm(analytic - numeric) / denom)


def _central_diff(fn, params: np.ndarray) -> np.ndarray:
    grad = np.empty_like(params)
    flat = params.ravel()
    out = grad.ravel()
    for k in range(flat.size):
        orig = flat[k]
        flat[k] = orig + _H
        up = fn()
        flat[k] = orig - _H
        down = fn()
        flat[k] = orig
        out[k] = (up - down) / (2.0 * _H)
    return grad


def _check_skipgram_trial(rng: np.random.Generator) -> float:
    dim = int(rng.integers(2, 9))
    n_neg = int(rng.integers(1, 6))
    v = rng.normal(scale=0.5, size=dim)
    u = rng.normal(scale=0.5, size=(1 + n_neg, dim))
    _, grad_v, grad_u = skipgram_gradients(v, u)
    num_v = _central_diff(lambda: skipgram_loss(v, u), v)
    num_u = _central_diff(lambda: skipgram_loss(v, u), u)
    return max(_rel_error(grad_v, num_v), _rel_error(grad_u, num_u))


def _check_glove_trial(rng: np.random.Generator) -> float:
    dim = int(rng.integers(1, 9))
    x_max = 100.0
    alpha = 0.75
    # span both weighting branches
    x = float(rng.uniform(0.1, 200.0))
    v = rng.normal(scale=0.5, size=dim)
    u = rng.normal(scale=0.5, size=dim)
    bias = rng.normal(scale=0.5, size=2)

    def loss() -> float:
        return glove_entry_loss(v, u, bias[0], bias[1], x, x_max, alpha)

    _, grad_v, grad_u, grad_b, grad_c = glove_entry_gradients(
        v, u, bias[0], bias[1], x, x_max, alpha)
    num_v = _central_diff(loss, v)
    num_u = _central_diff(loss, u)
    num_bias = _central_diff(loss, bias)
    return max(
        _rel_error(grad_v, num_v),
        _rel_error(grad_u, num_u),
        _rel_error(np.array([grad_b, grad_c]), num_bias),
    )


def gradient_check(
    model_kind: str,
    trial_count: int = 100,
    seed: int = 0,
) -> GradientCheckReport:
    """Compare analytic gradients against central finite differences over
    ``trial_count`` random small configurations."""
    if model_kind not in ("skipgram", "glove"):
        raise ValueError(f"unknown model kind: {model_kind!r}")
    rng = np.random.default_rng(seed)
    trial = _check_skipgram_trial if model_kind == "skipgram" \
        else _check_glove_trial
    worst = 0.0
    for _ in range(trial_count):
        worst = max(worst, trial(rng))
    return GradientCheckReport(model_kind, trial_count, worst)
