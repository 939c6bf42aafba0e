import json

import pytest

from casdec.data import (
    DatasetError,
    DatasetRecord,
    load_jsonl,
    save_jsonl,
    synthetic_corpus,
)
from casdec.text import split_text


def write_lines(tmp_path, lines):
    path = tmp_path / "data.jsonl"
    path.write_text("\n".join(lines) + "\n")
    return path


def record_line(rid, doc="the cat sat .", ref="the cat .", **extra):
    obj = {"id": rid, "document": doc, "reference": ref, **extra}
    return json.dumps(obj)


def test_record_tokenized_on_construction():
    rec = DatasetRecord(id="r1", document="The cat sat.", reference="a cat.")
    assert rec.document_ids
    assert rec.reference_ids
    assert rec.vocab.id_of("cat") == rec.document_ids[1]


def test_record_rejects_empty_fields():
    with pytest.raises(DatasetError):
        DatasetRecord(id="r1", document="", reference="x")
    with pytest.raises(DatasetError):
        DatasetRecord(id="r1", document="x", reference="   ")


def test_record_span_bounds():
    with pytest.raises(DatasetError):
        DatasetRecord(id="r1", document="a cat", reference="a cat",
                      entities=[(0, 99)])


def test_document_sentences_split():
    rec = DatasetRecord(id="r1", document="a cat . b dog ! c",
                        reference="a cat")
    sents = rec.document_sentences()
    assert len(sents) == 3
    assert sents[0][-1] == rec.vocab.id_of(".")
    assert sents[1][-1] == rec.vocab.id_of("!")


def test_load_jsonl_roundtrip(tmp_path):
    path = write_lines(tmp_path, [
        record_line("a"),
        record_line("b", entities=[[0, 1]]),
    ])
    records = load_jsonl(path)
    assert [r.id for r in records] == ["a", "b"]
    assert records[1].entities == [[0, 1]]
    out = tmp_path / "out.jsonl"
    save_jsonl(records, out)
    again = load_jsonl(out)
    assert [r.document for r in again] == [r.document for r in records]


def test_load_jsonl_reports_line_numbers(tmp_path):
    path = write_lines(tmp_path, [record_line("a"), "{not json"])
    with pytest.raises(DatasetError, match=":2:"):
        load_jsonl(path)


def test_load_jsonl_duplicate_id_names_both_lines(tmp_path):
    path = write_lines(tmp_path, [record_line("a"), record_line("a")])
    with pytest.raises(DatasetError, match="line 1"):
        load_jsonl(path)


def test_load_jsonl_missing_field(tmp_path):
    path = write_lines(tmp_path, ['{"id": "a", "document": "x"}'])
    with pytest.raises(DatasetError, match="reference"):
        load_jsonl(path)


def test_load_jsonl_empty_file_warns(tmp_path, caplog):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with caplog.at_level("WARNING"):
        assert load_jsonl(path) == []
    assert any("no records" in m for m in caplog.messages)


def test_synthetic_corpus_deterministic():
    a = synthetic_corpus(10, seed=4)
    b = synthetic_corpus(10, seed=4)
    assert [r.document for r in a] == [r.document for r in b]
    c = synthetic_corpus(10, seed=5)
    assert [r.document for r in a] != [r.document for r in c]


def test_synthetic_corpus_structure():
    for rec in synthetic_corpus(25, seed=0):
        # the reference sentence appears verbatim in the document
        assert rec.reference in rec.document
        ref_toks = split_text(rec.reference)
        assert rec.entities and rec.noun_phrases
        for start, end in rec.entities + rec.noun_phrases:
            assert 0 <= start < end <= len(ref_toks)
        # ids unique and stable format
        assert rec.id.startswith("syn-")
