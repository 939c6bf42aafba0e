"""Shared fixtures: small vocabularies, table-model builders, random model
generators, and the brute-force constrained-decoding oracle."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from casdec.constraints import ConstraintPhrase, ConstraintSet, contains_phrase
from casdec.decoding import length_normalized_score
from casdec.models import TableModel
from casdec.text import Vocabulary


@pytest.fixture
def abc_vocab():
    return Vocabulary(["a", "b", "c"])


def uniform_table(vocab: Vocabulary) -> TableModel:
    """TableModel whose every row is uniform over non-BOS tokens."""
    support = [t for t in vocab.tokens if t != "<s>" and t != "<unk>"]
    p = 1.0 / len(support)
    return TableModel(vocab, {"__default__": {t: p for t in support}})


def random_table_model(vocab: Vocabulary, rng: np.random.Generator,
                       n_rows: int = 6, max_prefix_len: int = 3) -> TableModel:
    """TableModel with random stored rows plus a random default row.

    Distributions cover all non-BOS, non-UNK tokens with positive mass so
    every sequence is reachable.
    """
    support = [t for t in vocab.tokens if t not in ("<s>", "<unk>")]
    content = [t for t in support if t != "</s>"]

    def random_dist():
        w = rng.random(len(support)) + 0.05
        w /= w.sum()
        return {t: float(p) for t, p in zip(support, w)}

    rows = {"__default__": random_dist()}
    for _ in range(n_rows):
        plen = int(rng.integers(1, max_prefix_len + 1))
        prefix = " ".join(
            content[int(rng.integers(0, len(content)))] for _ in range(plen)
        )
        rows[prefix] = random_dist()
    return TableModel(vocab, rows)


def brute_force_best(model, constraints: ConstraintSet, max_length: int,
                     alpha: float):
    """Exhaustive constrained argmax over all sequences of content length
    <= max_length, each terminated by EOS.

    Returns (normalized_score, tokens) with the decoder's tie-break
    (higher score first, then lexicographically smaller token tuple), or
    None when no sequence satisfies the constraints.
    """
    vocab = model.vocab
    content_ids = [
        i for i in range(len(vocab))
        if i not in (vocab.bos_id, vocab.eos_id)
    ]
    best = None
    for length in range(0, max_length + 1):
        for content in itertools.product(content_ids, repeat=length):
            if not all(contains_phrase(content, p) for p in constraints):
                continue
            lp = 0.0
            for i, tok in enumerate(content):
                lp += float(model.next_logprobs(list(content[:i]))[tok])
            lp += float(model.next_logprobs(list(content))[vocab.eos_id])
            tokens = content + (vocab.eos_id,)
            norm = length_normalized_score(lp, len(tokens), alpha)
            key = (-norm, tokens)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return -best[0], best[1]


def phrase(*ids) -> ConstraintPhrase:
    return ConstraintPhrase(tuple(ids))
