"""Pluggable next-token scoring models.

Two desk-scale models implement the interface: an explicit lookup table
(verification oracle) and an add-lambda smoothed n-gram model with backoff.
Both are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod

import numpy as np

from .text import Vocabulary, split_text

# Finite stand-in for log(0) so score arithmetic never produces NaN.
LOGPROB_FLOOR = -1e9

DEFAULT_KEY = "__default__"


class ScoringModel(ABC):
    """Next-token log-probability source over a fixed vocabulary."""

    def __init__(self, vocab: Vocabulary):
        self.vocab = vocab

    @abstractmethod
    def next_logprobs(self, prefix) -> np.ndarray:
        """Log-probabilities of every vocabulary item given the prefix.

        `prefix` is the sequence of generated token ids (no BOS). The
        returned vector has length |V| and log-sum-exps to 0.
        """


class TableModel(ScoringModel):
    """Scoring model backed by an explicit prefix -> distribution map.

    Rows are keyed by the space-joined token strings of the prefix; the
    "__default__" row is used for prefixes without a stored row. Tokens
    absent from a row get the floor log-probability.
    """

    def __init__(self, vocab: Vocabulary, rows: dict, default: dict | None = None):
        super().__init__(vocab)
        if default is None:
            default = rows.get(DEFAULT_KEY)
        if default is None:
            raise ValueError("TableModel requires a __default__ distribution")
        self._rows = {}
        for key, dist in rows.items():
            if key == DEFAULT_KEY:
                continue
            self._rows[key] = self._row_vector(dist, key)
        self._default = self._row_vector(default, DEFAULT_KEY)

    def _row_vector(self, dist: dict, key: str) -> np.ndarray:
        total = sum(dist.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"distribution for {key!r} sums to {total}, not 1")
        vec = np.full(len(self.vocab), LOGPROB_FLOOR)
        for tok, p in dist.items():
            if tok not in self.vocab:
                raise ValueError(f"unknown token {tok!r} in row {key!r}")
            if p > 0:
                vec[self.vocab.id_of(tok)] = math.log(p)
        vec.setflags(write=False)
        return vec

    def next_logprobs(self, prefix) -> np.ndarray:
        key = " ".join(self.vocab.token_of(t) for t in prefix)
        return self._rows.get(key, self._default)

    @classmethod
    def from_json(cls, path, vocab: Vocabulary | None = None) -> "TableModel":
        with open(path, encoding="utf-8") as f:
            spec = json.load(f)
        rows = spec["rows"] if "rows" in spec else spec
        if vocab is None:
            toks = []
            for key, dist in rows.items():
                if key != DEFAULT_KEY:
                    toks.extend(key.split())
                toks.extend(dist)
            seen, ordered = set(), []
            for t in toks:
                if t not in seen:
                    seen.add(t)
                    ordered.append(t)
            vocab = Vocabulary(ordered)
        return cls(vocab, rows)


class NGramModel(ScoringModel):
    """Add-lambda smoothed n-gram model with backoff to shorter contexts.

    Contexts are padded with n-1 BOS tokens. EOS is an ordinary predicted
    vocabulary item; BOS is never predicted (floored), so the smoothing
    support has |V|-1 items.
    """

    def __init__(self, vocab: Vocabulary, order: int, lam: float,
                 counts: dict, totals: dict):
        super().__init__(vocab)
        if order < 1:
            raise ValueError("order must be >= 1")
        if lam <= 0:
            raise ValueError("lambda must be > 0")
        self.order = order
        self.lam = lam
        self._counts = counts    # context tuple -> {token_id: count}
        self._totals = totals    # context tuple -> total count
        self._cache: dict[tuple, np.ndarray] = {}

    def _context_of(self, prefix) -> tuple:
        padded = [self.vocab.bos_id] * (self.order - 1) + list(prefix)
        if self.order == 1:
            return ()
        return tuple(padded[-(self.order - 1):])

    def next_logprobs(self, prefix) -> np.ndarray:
        ctx = self._context_of(prefix)
        while ctx not in self._totals and ctx:
            ctx = ctx[1:]
        cached = self._cache.get(ctx)
        if cached is not None:
            return cached
        support = len(self.vocab) - 1  # everything but BOS
        total = self._totals.get(ctx, 0)
        denom = total + self.lam * support
        probs = np.full(len(self.vocab), self.lam / denom)
        for tok, c in self._counts.get(ctx, {}).items():
            probs[tok] = (c + self.lam) / denom
        probs[self.vocab.bos_id] = 0.0
        with np.errstate(divide="ignore"):
            vec = np.log(probs)
        vec[vec == -np.inf] = LOGPROB_FLOOR
        vec.setflags(write=False)
        self._cache[ctx] = vec
        return vec


class TrainingError(ValueError):
    """Raised for unusable n-gram training input."""


def ngram_train(corpus, order: int, lam: float, vocab: Vocabulary) -> NGramModel:
    """Estimate an add-lambda NGramModel from token-id sequences.

    Counts every context of length 0..order-1 (after BOS padding) so the
    model can back off to shorter contexts at query time. Sequences are
    counted as given; append EOS to training sequences if end-of-sequence
    should carry learned probability mass.
    """
    if order < 1:
        raise TrainingError("order must be >= 1")
    if lam <= 0:
        raise TrainingError("lambda must be > 0")
    corpus = list(corpus)
    if not corpus or all(len(s) == 0 for s in corpus):
        raise TrainingError("empty training corpus")
    counts: dict[tuple, dict[int, int]] = {}
    totals: dict[tuple, int] = {}
    for seq in corpus:
        padded = [vocab.bos_id] * (order - 1) + list(seq)
        for i in range(order - 1, len(padded)):
            tok = padded[i]
            for k in range(order):
                ctx = tuple(padded[i - k:i])
                row = counts.setdefault(ctx, {})
                row[tok] = row.get(tok, 0) + 1
                totals[ctx] = totals.get(ctx, 0) + 1
    return NGramModel(vocab, order, lam, counts, totals)


def train_from_lines(lines, order: int, lam: float,
                     vocab: Vocabulary | None = None,
                     append_eos: bool = True) -> NGramModel:
    """Train an n-gram model from whitespace-tokenized text lines."""
    token_lines = [split_text(line) for line in lines if line.strip()]
    if vocab is None:
        seen, ordered = set(), []
        for toks in token_lines:
            for t in toks:
                if t not in seen:
                    seen.add(t)
                    ordered.append(t)
        vocab = Vocabulary(ordered)
    corpus = []
    for toks in token_lines:
        ids = [vocab.id_of(t) for t in toks]
        if append_eos:
            ids.append(vocab.eos_id)
        corpus.append(ids)
    return ngram_train(corpus, order, lam, vocab)
