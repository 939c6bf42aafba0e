"""Constrained summarization workbench.

Lexically constrained beam search with dynamic beam allocation, automatic
and reference-derived constraint discovery, ROUGE evaluation, and an
interactive HTTP session service.
"""

from .text import Vocabulary, tokenize, detokenize
from .models import ScoringModel, TableModel, NGramModel, ngram_train
from .constraints import (
    ConstraintPhrase,
    ConstraintSet,
    ConstraintTrie,
    ConstraintState,
    build_trie,
    advance,
    contains_phrase,
)
from .decoding import (
    DecodeConfig,
    DecodeResult,
    beam_search,
    dba_decode,
    allocate_banks,
    length_normalized_score,
    append_baseline,
)
from .rouge import RougeScore, rouge_n, rouge_l, corpus_rouge

__version__ = "0.1.0"

__all__ = [
    "Vocabulary",
    "tokenize",
    "detokenize",
    "ScoringModel",
    "TableModel",
    "NGramModel",
    "ngram_train",
    "ConstraintPhrase",
    "ConstraintSet",
    "ConstraintTrie",
    "ConstraintState",
    "build_trie",
    "advance",
    "contains_phrase",
    "DecodeConfig",
    "DecodeResult",
    "beam_search",
    "dba_decode",
    "allocate_banks",
    "length_normalized_score",
    "append_baseline",
    "RougeScore",
    "rouge_n",
    "rouge_l",
    "corpus_rouge",
]
