"""Unsupervised keyphrase extraction and constraint filtering.

Candidates are document n-grams (up to 5 tokens) that neither start nor
end on a stopword or punctuation, scored by summed tf*idf with an
early-position boost. Filtering removes phrases already present in the
unconstrained summary, applies a score threshold, and keeps the top k
with nested sub-phrases deduplicated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constraints import ConstraintPhrase, ConstraintSet, contains_phrase
from .text import Vocabulary, is_stopword_or_punct

# Calibrated on the bundled synthetic corpus so roughly 10% of records
# end up with a nonempty constraint set (analog of a scorer-specific
# threshold; not portable across scorers).
DEFAULT_MIN_SCORE = 37.0


@dataclass(frozen=True)
class KeyphraseCandidate:
    tokens: tuple
    score: float
    first_position: int

    def __len__(self):
        return len(self.tokens)


@dataclass
class KpeConfig:
    max_ngram: int = 5
    top_k: int = 3
    min_score: float = DEFAULT_MIN_SCORE
    idf: dict = field(default_factory=dict)
    default_idf: float = 1.0

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.max_ngram < 1:
            raise ValueError("max_ngram must be >= 1")


def compute_idf(documents) -> dict[str, float]:
    """Smoothed inverse document frequency from token-string documents."""
    n_docs = 0
    df: dict[str, int] = {}
    for doc in documents:
        n_docs += 1
        for tok in set(doc):
            df[tok] = df.get(tok, 0) + 1
    return {
        tok: math.log((1 + n_docs) / (1 + d)) + 1.0 for tok, d in df.items()
    }


def extract_keyphrases(document, config: KpeConfig,
                       vocab: Vocabulary) -> list[KeyphraseCandidate]:
    """Rank candidate n-grams of the document by tf*idf with position decay.

    score(p) = (sum over distinct tokens of tf * idf)
               * 1 / (1 + first_pos / len(doc))
    """
    doc = list(document)
    if not doc:
        return []
    strings = [vocab.token_of(t) for t in doc]
    tf: dict[int, int] = {}
    for t in doc:
        tf[t] = tf.get(t, 0) + 1
    skip = [is_stopword_or_punct(s) or t == vocab.unk_id
            for t, s in zip(doc, strings)]
    doc_len = len(doc)
    seen: dict[tuple, KeyphraseCandidate] = {}
    for i in range(doc_len):
        if skip[i]:
            continue
        for n in range(1, config.max_ngram + 1):
            j = i + n
            if j > doc_len:
                break
            if skip[j - 1]:
                continue
            gram = tuple(doc[i:j])
            if gram in seen:
                continue
            weight = sum(
                tf[t] * config.idf.get(vocab.token_of(t), config.default_idf)
                for t in set(gram)
            )
            score = weight / (1.0 + i / doc_len)
            seen[gram] = KeyphraseCandidate(gram, score, i)
    ranked = sorted(
        seen.values(), key=lambda c: (-c.score, c.first_position, c.tokens)
    )
    return ranked


def _is_subphrase(short: tuple, long: tuple) -> bool:
    n = len(short)
    return n <= len(long) and any(
        long[i:i + n] == short for i in range(len(long) - n + 1)
    )


def filter_constraints(candidates, s_prime, config: KpeConfig,
                       vocab: Vocabulary) -> ConstraintSet:
    """Keep the top-k scoring candidates that are absent from the
    unconstrained summary, dropping nested sub-phrases of kept ones."""
    s_prime = list(s_prime)
    kept: list[KeyphraseCandidate] = []
    for cand in candidates:
        if len(kept) >= config.top_k:
            break
        if cand.score < config.min_score:
            continue
        phrase = ConstraintPhrase(cand.tokens)
        if contains_phrase(s_prime, phrase):
            continue
        if any(_is_subphrase(cand.tokens, k.tokens) for k in kept):
            continue
        kept.append(cand)
    phrases = [
        ConstraintPhrase(
            c.tokens, " ".join(vocab.token_of(t) for t in c.tokens)
        )
        for c in kept
    ]
    return ConstraintSet(phrases)
