"""Dataset records, JSONL ingestion, and the bundled synthetic corpus.

Records are (document, reference) pairs with optional entity/noun-phrase
span annotations over the reference tokens. The synthetic generator
produces news-like documents whose most probable phrasing (under a
per-document n-gram model) is a distractor sentence, while the reference
states a lower-frequency key fact; constraints pulled from the reference
steer decoding back onto the key fact.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .text import Vocabulary, split_text

log = logging.getLogger(__name__)


class DatasetError(ValueError):
    """Raised for malformed dataset files."""


@dataclass
class DatasetRecord:
    id: str
    document: str
    reference: str
    entities: list | None = None       # (start, end) spans over reference tokens
    noun_phrases: list | None = None
    vocab: Vocabulary = field(init=False, repr=False)
    document_ids: list = field(init=False, repr=False)
    reference_ids: list = field(init=False, repr=False)

    def __post_init__(self):
        doc_toks = split_text(self.document)
        ref_toks = split_text(self.reference)
        if not doc_toks:
            raise DatasetError(f"record {self.id!r}: empty document")
        if not ref_toks:
            raise DatasetError(f"record {self.id!r}: empty reference")
        self.vocab = Vocabulary.from_texts([self.document, self.reference])
        self.document_ids = [self.vocab.id_of(t) for t in doc_toks]
        self.reference_ids = [self.vocab.id_of(t) for t in ref_toks]
        for name, spans in (("entities", self.entities),
                            ("noun_phrases", self.noun_phrases)):
            for span in spans or []:
                start, end = span
                if not (0 <= start < end <= len(ref_toks)):
                    raise DatasetError(
                        f"record {self.id!r}: {name} span {span} out of bounds"
                    )

    def document_sentences(self) -> list[list[int]]:
        """Document token ids split at sentence-final punctuation
        (terminator included in each sentence)."""
        sentences, cur = [], []
        period = {self.vocab.id_of(t) for t in (".", "!", "?")}
        for tok in self.document_ids:
            cur.append(tok)
            if tok in period:
                sentences.append(cur)
                cur = []
        if cur:
            sentences.append(cur)
        return sentences


def load_jsonl(path) -> list[DatasetRecord]:
    """Read one record per line: {id, document, reference, entities?,
    noun_phrases?}. Malformed lines raise with their line number."""
    records = []
    seen_ids: dict[str, int] = {}
    n_lines = 0
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            n_lines += 1
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetError(f"{path}:{lineno}: invalid JSON: {e}") from e
            try:
                rec = DatasetRecord(
                    id=str(obj["id"]),
                    document=obj["document"],
                    reference=obj["reference"],
                    entities=obj.get("entities"),
                    noun_phrases=obj.get("noun_phrases"),
                )
            except KeyError as e:
                raise DatasetError(f"{path}:{lineno}: missing field {e}") from e
            except DatasetError as e:
                raise DatasetError(f"{path}:{lineno}: {e}") from e
            if rec.id in seen_ids:
                raise DatasetError(
                    f"{path}:{lineno}: duplicate id {rec.id!r}"
                    f" (first seen on line {seen_ids[rec.id]})"
                )
            seen_ids[rec.id] = lineno
            records.append(rec)
    if not records:
        log.warning("no records loaded from %s", path)
    return records


def save_jsonl(records, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            obj = {
                "id": rec.id,
                "document": rec.document,
                "reference": rec.reference,
            }
            if rec.entities is not None:
                obj["entities"] = [list(s) for s in rec.entities]
            if rec.noun_phrases is not None:
                obj["noun_phrases"] = [list(s) for s in rec.noun_phrases]
            f.write(json.dumps(obj) + "\n")


# ---------------------------------------------------------------------------
# Synthetic corpus

_FIRST = ["anwen", "bryn", "carys", "dylan", "eira", "ffion", "gareth",
          "huw", "iolo", "lowri", "megan", "owain", "rhian", "sion"]
_LAST = ["adams", "bevan", "davies", "evans", "griffiths", "hughes",
         "jenkins", "lewis", "morgan", "owens", "price", "rees",
         "thomas", "williams"]
_PLACES = ["bangor", "cardiff", "conwy", "denbigh", "gwynedd", "harlech",
           "llandudno", "newport", "powys", "swansea", "tenby", "wrexham"]
_VERBS = ["approved", "backed", "blocked", "criticised", "launched",
          "opened", "praised", "rejected", "unveiled", "welcomed"]
_ADJS = ["coastal", "controversial", "disused", "historic", "modern",
         "new", "proposed", "rural", "struggling", "vacant"]
_NOUNS = ["bridge", "clinic", "factory", "harbour", "library", "museum",
          "railway", "school", "stadium", "theatre"]
_TOPICS = ["budget", "election", "funding", "inquiry", "report",
           "review", "strike", "survey"]


def _make_record(index: int, rng: np.random.Generator) -> DatasetRecord:
    pick = lambda pool: str(rng.choice(pool))
    fn, ln = pick(_FIRST), pick(_LAST)
    place = pick(_PLACES)
    verb = pick(_VERBS)
    adj, noun = pick(_ADJS), pick(_NOUNS)
    topic = pick(_TOPICS)
    dplace = pick([p for p in _PLACES if p != place])
    dfn, dln = pick(_FIRST), pick(_LAST)

    # Key fact (becomes the reference); stated once in the document.
    key = f"{fn} {ln} has {verb} the {adj} {noun} in {place} ."
    reference = key

    # High-frequency distractor pattern dominating the document LM.
    distractor = f"the {topic} report was expected in {dplace} officials said ."
    # Entity trap: the reference entity in a cheaper, off-reference context.
    trap = f"{fn} {ln} said the {topic} report was expected soon ."
    background = f"{dfn} {dln} urged a review of the {topic} in {dplace} ."

    sentences = [key, trap, background] + [distractor] * int(rng.integers(2, 4))
    order = rng.permutation(len(sentences))
    document = " ".join(sentences[i] for i in order)

    ref_toks = split_text(reference)
    name_start = ref_toks.index(fn)
    entities = [
        (name_start, name_start + 2),
        (ref_toks.index(place), ref_toks.index(place) + 1),
    ]
    noun_phrases = [
        (ref_toks.index(adj), ref_toks.index(noun) + 1),
    ]
    return DatasetRecord(
        id=f"syn-{index:05d}",
        document=document,
        reference=reference,
        entities=entities,
        noun_phrases=noun_phrases,
    )


def synthetic_corpus(n_records: int, seed: int = 0) -> list[DatasetRecord]:
    """Seeded generator for desk-scale end-to-end experiments."""
    rng = np.random.default_rng(seed)
    return [_make_record(i, rng) for i in range(n_records)]
