"""Reference-derived constraint strategies simulating human feedback.

Strategy names follow the experiment taxonomy: NER (entity spans of the
reference), rand4 (random reference tokens), phr4 (one contiguous
reference window), with -miss (absent from the unconstrained summary),
-src (present in the source document), and -NP (add noun phrases)
modifiers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .constraints import ConstraintPhrase, ConstraintSet, contains_phrase
from .text import STOPWORDS, Vocabulary, is_stopword_or_punct

STRATEGIES = (
    "NER",
    "NER-miss",
    "rand4",
    "rand4-miss",
    "NER-miss-src",
    "NER-NP-miss-src",
    "phr4",
)


@dataclass(frozen=True)
class EntityAnnotation:
    """Spans (start, end, kind) over the reference token sequence."""

    spans: tuple

    @staticmethod
    def from_record_fields(entities=None, noun_phrases=None,
                           length: int | None = None) -> "EntityAnnotation":
        spans = []
        for start, end in entities or []:
            spans.append((int(start), int(end), "entity"))
        for start, end in noun_phrases or []:
            spans.append((int(start), int(end), "noun_phrase"))
        for start, end, _ in spans:
            if start < 0 or end <= start or (length is not None and end > length):
                raise ValueError(f"annotation span ({start}, {end}) out of bounds")
        return EntityAnnotation(tuple(spans))


@dataclass
class StrategyConfig:
    strategy: str
    seed: int = 0
    rand_count: int = 4
    phrase_len: int = 4

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}"
            )


_CASE_TOKEN_RE = re.compile(
    r"-l[rs]b-|-r[rs]b-|'[a-z0-9]+|[a-z0-9]+(?:[-'][a-z0-9]+)*|[^\sa-z0-9]",
    re.IGNORECASE,
)
_SENT_END = {".", "!", "?"}


def detect_entities(raw_text: str,
                    ann: EntityAnnotation | None = None) -> list[tuple]:
    """Entity spans from annotations, or a capitalization heuristic.

    The heuristic takes maximal runs of capitalized tokens in the raw
    (pre-lowercasing) text, excluding sentence-initial singletons and
    all-stopword runs.
    """
    if ann is not None:
        return list(ann.spans)
    tokens = _CASE_TOKEN_RE.findall(raw_text)
    spans = []
    i = 0
    while i < len(tokens):
        if tokens[i][:1].isupper():
            j = i
            while j < len(tokens) and tokens[j][:1].isupper():
                j += 1
            sentence_initial = i == 0 or tokens[i - 1] in _SENT_END
            singleton = j - i == 1
            all_stop = all(t.lower() in STOPWORDS for t in tokens[i:j])
            if not (singleton and sentence_initial) and not all_stop:
                spans.append((i, j, "entity"))
            i = j
        else:
            i += 1
    return spans


def _span_phrases(reference, spans, vocab: Vocabulary, kinds=None):
    phrases = []
    for start, end, kind in spans:
        if kinds is not None and kind not in kinds:
            continue
        toks = tuple(reference[start:end])
        if not toks:
            continue
        phrases.append(
            ConstraintPhrase(toks, " ".join(vocab.token_of(t) for t in toks))
        )
    return phrases


def ground_truth_constraints(reference, s_prime, document,
                             ann: EntityAnnotation | None,
                             cfg: StrategyConfig,
                             vocab: Vocabulary,
                             raw_reference: str = "") -> ConstraintSet:
    """Build a constraint set from the reference per the chosen strategy."""
    reference = list(reference)
    s_prime = list(s_prime)
    document = list(document)
    if not reference:
        raise ValueError("reference must be nonempty")
    parts = cfg.strategy.split("-")
    base = parts[0]
    flags = set(parts[1:])
    rng = np.random.default_rng(cfg.seed)

    if base == "rand4":
        pool = []
        seen = set()
        sprime_set = set(s_prime)
        for t in reference:
            s = vocab.token_of(t)
            if t in seen or is_stopword_or_punct(s) or t == vocab.unk_id:
                continue
            if "miss" in flags and t in sprime_set:
                continue
            seen.add(t)
            pool.append(t)
        if len(pool) > cfg.rand_count:
            idx = sorted(rng.choice(len(pool), size=cfg.rand_count, replace=False))
            pool = [pool[i] for i in idx]
        phrases = [
            ConstraintPhrase((t,), vocab.token_of(t)) for t in pool
        ]
        return ConstraintSet(phrases)

    if base == "phr4":
        n = cfg.phrase_len
        if len(reference) <= n:
            windows = [tuple(reference)]
        else:
            windows = [
                tuple(reference[i:i + n])
                for i in range(len(reference) - n + 1)
            ]
        admissible = [
            w for w in windows if not contains_phrase(s_prime, ConstraintPhrase(w))
        ]
        if not admissible:
            return ConstraintSet([])
        w = admissible[int(rng.integers(0, len(admissible)))]
        return ConstraintSet([
            ConstraintPhrase(w, " ".join(vocab.token_of(t) for t in w))
        ])

    # NER family
    kinds = {"entity"}
    if "NP" in flags:
        kinds.add("noun_phrase")
    spans = ann.spans if ann is not None else detect_entities(raw_reference)
    phrases = _span_phrases(reference, spans, vocab, kinds=kinds)
    if "miss" in flags:
        phrases = [p for p in phrases if not contains_phrase(s_prime, p)]
    if "src" in flags:
        phrases = [p for p in phrases if contains_phrase(document, p)]
    return ConstraintSet(phrases)
