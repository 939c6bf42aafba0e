"""Vocabulary and whitespace/punctuation tokenization.

Token sequences are plain lists of int ids. The tokenizer lowercases,
splits punctuation into separate tokens, and passes PTB-style bracket
escapes (-lrb-, -rrb-, ...) through verbatim, matching pre-tokenized
news-summarization corpora.
"""

from __future__ import annotations

import re

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
RESERVED = (BOS, EOS, UNK)

# Bracket escapes first, then clitics ('s, 'll, ...), then words
# (hyphen/apostrophe-joined allowed), then any single punctuation char.
_TOKEN_RE = re.compile(
    r"-l[rs]b-|-r[rs]b-|'[a-z0-9]+|[a-z0-9]+(?:[-'][a-z0-9]+)*|[^\sa-z0-9]"
)


class InvalidTokenError(ValueError):
    """Raised when a token id is outside the vocabulary."""


class Vocabulary:
    """Dense token-string <-> id mapping with reserved BOS/EOS/UNK."""

    def __init__(self, tokens):
        seen = set()
        ordered = []
        for t in RESERVED:
            ordered.append(t)
            seen.add(t)
        for t in tokens:
            if t in seen:
                if t not in RESERVED:
                    raise ValueError(f"duplicate token {t!r}")
                continue
            seen.add(t)
            ordered.append(t)
        self.tokens = ordered
        self._ids = {t: i for i, t in enumerate(ordered)}
        self.bos_id = self._ids[BOS]
        self.eos_id = self._ids[EOS]
        self.unk_id = self._ids[UNK]

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def id_of(self, token: str) -> int:
        return self._ids.get(token, self.unk_id)

    def token_of(self, token_id: int) -> str:
        if not 0 <= token_id < len(self.tokens):
            raise InvalidTokenError(f"token id {token_id} out of range")
        return self.tokens[token_id]

    @classmethod
    def from_texts(cls, texts) -> "Vocabulary":
        """Build a vocabulary from raw texts, in first-seen order."""
        seen = set()
        ordered = []
        for text in texts:
            for tok in split_text(text):
                if tok not in seen:
                    seen.add(tok)
                    ordered.append(tok)
        return cls(ordered)

    def to_dict(self) -> dict:
        return {"tokens": self.tokens[len(RESERVED):]}

    @classmethod
    def from_dict(cls, d: dict) -> "Vocabulary":
        return cls(d["tokens"])


def split_text(text: str) -> list[str]:
    """Lowercase and split into surface tokens (no vocabulary lookup)."""
    return _TOKEN_RE.findall(text.lower())


def tokenize(text: str, vocab: Vocabulary) -> list[int]:
    """Map text to token ids; out-of-vocabulary tokens become UNK."""
    return [vocab.id_of(t) for t in split_text(text)]


def detokenize(seq, vocab: Vocabulary) -> str:
    """Space-join token strings, dropping BOS/EOS."""
    parts = []
    for tid in seq:
        tok = vocab.token_of(tid)
        if tok in (BOS, EOS):
            continue
        parts.append(tok)
    return " ".join(parts)


# Small English stopword list used by keyphrase extraction and the
# random-token constraint strategies.
STOPWORDS = frozenset(
    """a about above after again all also am an and any are as at be because
    been before being below between both but by could did do does doing down
    during each few for from further had has have having he her here hers him
    his how i if in into is it its itself just me more most my no nor not of
    off on once only or other our ours out over own s said same she should so
    some such t than that the their theirs them then there these they this
    those through to too under until up very was we were what when where which
    while who whom why will with would you your yours""".split()
)

_PUNCT_RE = re.compile(r"^[^\w]+$")


def is_stopword_or_punct(token: str) -> bool:
    return token in STOPWORDS or bool(_PUNCT_RE.match(token))
