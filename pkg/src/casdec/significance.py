"""Paired significance tests for per-record metric scores."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SignificanceResult:
    p_value: float
    n_resamples: int
    method: str
    seed: int


def _check(scores_a, scores_b):
    a = np.asarray(scores_a, dtype=float)
    b = np.asarray(scores_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("score lists must have equal length")
    if a.size < 2:
        raise ValueError("need at least 2 paired scores")
    return a, b


def paired_bootstrap(scores_a, scores_b, n_resamples: int = 1000,
                     seed: int = 0) -> SignificanceResult:
    """p = fraction of paired resamples where mean(A) <= mean(B).

    Small p supports "system A beats system B".
    """
    a, b = _check(scores_a, scores_b)
    rng = np.random.default_rng(seed)
    n = a.size
    wins = 0
    for _ in range(n_resamples):
        idx = rng.integers(0, n, size=n)
        if a[idx].mean() <= b[idx].mean():
            wins += 1
    return SignificanceResult(wins / n_resamples, n_resamples, "bootstrap", seed)


def approx_randomization(scores_a, scores_b, n_shuffles: int = 1000,
                         seed: int = 0) -> SignificanceResult:
    """p = fraction of sign-flip shuffles whose mean difference is at
    least the observed mean difference."""
    a, b = _check(scores_a, scores_b)
    rng = np.random.default_rng(seed)
    diffs = a - b
    observed = diffs.mean()
    n = diffs.size
    hits = 0
    for _ in range(n_shuffles):
        signs = rng.integers(0, 2, size=n) * 2 - 1
        if (diffs * signs).mean() >= observed:
            hits += 1
    return SignificanceResult(
        hits / n_shuffles, n_shuffles, "approx_randomization", seed
    )
