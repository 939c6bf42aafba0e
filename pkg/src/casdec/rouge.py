"""ROUGE-1/2/L over token-id sequences.

Computed on tokens as produced by the tokenizer (already lowercased); no
stemming or stopword removal. ROUGE-L uses sequence-level LCS.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from . import kernels


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_pr(p: float, r: float) -> "RougeScore":
        f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
        return RougeScore(p, r, f1)


ZERO = RougeScore(0.0, 0.0, 0.0)


def _ngrams(seq, n: int) -> Counter:
    return Counter(tuple(seq[i:i + n]) for i in range(len(seq) - n + 1))


def rouge_n(candidate, reference, n: int) -> RougeScore:
    """Clipped n-gram overlap F1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngrams(candidate, n)
    ref = _ngrams(reference, n)
    if not cand or not ref:
        return ZERO
    overlap = sum(min(c, ref[g]) for g, c in cand.items())
    return RougeScore.from_pr(overlap / sum(cand.values()),
                              overlap / sum(ref.values()))


def rouge_l(candidate, reference) -> RougeScore:
    """Longest-common-subsequence F1 over the whole sequences."""
    if not candidate or not reference:
        return ZERO
    # intern arbitrary hashable tokens as dense ints for the LCS kernel
    ids: dict = {}
    a = [ids.setdefault(t, len(ids)) for t in candidate]
    b = [ids.setdefault(t, len(ids)) for t in reference]
    lcs = kernels.lcs_length(a, b)
    return RougeScore.from_pr(lcs / len(candidate), lcs / len(reference))


def corpus_rouge(pairs) -> dict[str, float]:
    """Mean per-record F1 x 100 (2 decimals) for R-1, R-2, R-L.

    `pairs` is a list of (candidate, reference) token sequences.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("corpus_rouge needs at least one pair")
    sums = {"rouge1": 0.0, "rouge2": 0.0, "rougeL": 0.0}
    for cand, ref in pairs:
        sums["rouge1"] += rouge_n(cand, ref, 1).f1
        sums["rouge2"] += rouge_n(cand, ref, 2).f1
        sums["rougeL"] += rouge_l(cand, ref).f1
    n = len(pairs)
    return {k: round(100.0 * v / n, 2) for k, v in sums.items()}
