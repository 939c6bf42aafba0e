import pytest

from casdec.keyphrases import (
    KeyphraseCandidate,
    KpeConfig,
    compute_idf,
    extract_keyphrases,
    filter_constraints,
)
from casdec.text import Vocabulary, tokenize


def make(text):
    v = Vocabulary.from_texts([text])
    return tokenize(text, v), v


def test_all_stopwords_yields_nothing():
    doc, v = make("the of and in a")
    assert extract_keyphrases(doc, KpeConfig(), v) == []


def test_repeated_content_word_hand_score():
    doc, v = make("gwynedd gwynedd")
    cands = extract_keyphrases(
        doc, KpeConfig(idf={"gwynedd": 1.0}), v
    )
    top = cands[0]
    assert top.tokens == (v.id_of("gwynedd"),)
    # tf=2, idf=1, pos_decay(0)=1 -> 2.0; the bigram over the same
    # distinct token ties at 2.0 and loses on the shorter-tuple tie-break
    assert top.score == pytest.approx(2.0)


def test_candidates_never_start_or_end_on_stopword():
    doc, v = make("the harbour of conwy was busy .")
    for cand in extract_keyphrases(doc, KpeConfig(), v):
        first = v.token_of(cand.tokens[0])
        last = v.token_of(cand.tokens[-1])
        assert first not in ("the", "of", "was", ".")
        assert last not in ("the", "of", "was", ".")
        assert len(cand.tokens) <= 5


def test_earlier_position_ranks_first():
    doc, v = make("harbour stadium harbour stadium")
    cands = extract_keyphrases(doc, KpeConfig(), v)
    singles = [c for c in cands if len(c.tokens) == 1]
    assert v.token_of(singles[0].tokens[0]) == "harbour"
    assert singles[0].first_position == 0


def test_empty_document():
    _, v = make("x")
    assert extract_keyphrases([], KpeConfig(), v) == []


def test_compute_idf():
    idf = compute_idf([["a", "b"], ["a"]])
    assert idf["a"] < idf["b"]
    assert idf["a"] == pytest.approx(1.0)  # log(3/3) + 1


def test_filter_drops_present_in_s_prime():
    doc, v = make("gwynedd harbour railway")
    cands = extract_keyphrases(doc, KpeConfig(min_score=0.0), v)
    everything = filter_constraints(cands, [], KpeConfig(min_score=0.0), v)
    assert len(everything) <= 3
    filtered = filter_constraints(cands, doc, KpeConfig(min_score=0.0), v)
    assert len(filtered) == 0


def test_filter_top_k_cap():
    # disjoint candidates, so the sub-phrase rule never fires
    _, v = make("gwynedd harbour railway stadium museum")
    cands = [
        KeyphraseCandidate((v.id_of(w),), float(score), pos)
        for pos, (w, score) in enumerate([
            ("gwynedd", 5.0), ("harbour", 4.0), ("railway", 3.0),
            ("stadium", 2.0), ("museum", 1.0),
        ])
    ]
    kept = filter_constraints(cands, [], KpeConfig(min_score=0.0), v)
    assert len(kept) == 3
    assert kept.surface_texts()[0] == "gwynedd"


def test_filter_min_score_threshold():
    doc, v = make("gwynedd harbour")
    cands = extract_keyphrases(doc, KpeConfig(min_score=0.0), v)
    kept = filter_constraints(cands, [], KpeConfig(min_score=1e9), v)
    assert len(kept) == 0


def test_filter_drops_subphrases_of_kept():
    doc, v = make("voice voice uk voice uk voice uk")
    cands = extract_keyphrases(doc, KpeConfig(min_score=0.0), v)
    kept = filter_constraints(cands, [], KpeConfig(min_score=0.0), v)
    token_sets = [p.tokens for p in kept]
    for i, a in enumerate(token_sets):
        for j, b in enumerate(token_sets):
            if i < j:
                # no kept phrase is a contiguous sub-phrase of another
                n = len(b)
                assert not any(
                    a[k:k + n] == b for k in range(len(a) - n + 1)
                )


def test_kpe_config_validation():
    with pytest.raises(ValueError):
        KpeConfig(top_k=0)
    with pytest.raises(ValueError):
        KpeConfig(max_ngram=0)
