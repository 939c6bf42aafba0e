"""Acceptance suite: one test per acceptance criterion.

Each test prints a single PASS/FAIL line (through captured output) so the
suite doubles as a checklist. Tolerances are pinned in-line; timing
checks use wall-clock budgets stated with each criterion.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from casdec.bench import bench_decode
from casdec.constraints import ConstraintPhrase, ConstraintSet, contains_phrase
from casdec.data import synthetic_corpus
from casdec.decoding import (
    DecodeConfig,
    append_baseline,
    beam_search,
    dba_decode,
)
from casdec.experiment import (
    ExperimentConfig,
    run_experiment,
    train_document_model,
)
from casdec.rouge import corpus_rouge, rouge_l, rouge_n
from casdec.significance import paired_bootstrap
from casdec.strategies import EntityAnnotation, StrategyConfig, ground_truth_constraints
from casdec.text import Vocabulary, split_text

from conftest import brute_force_best, random_table_model


def report(capsys, ok: bool, name: str, detail: str = ""):
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f" — {detail}"
        print(f"\n{line}")
    assert ok, f"{name}: {detail}"


def derive_ner_miss(record, s_prime_ids, seed=0):
    ann = EntityAnnotation.from_record_fields(
        record.entities, record.noun_phrases, len(record.reference_ids)
    )
    cfg = StrategyConfig(strategy="NER-miss", seed=seed)
    return ground_truth_constraints(
        record.reference_ids, s_prime_ids, record.document_ids,
        ann, cfg, record.vocab, raw_reference=record.reference,
    )


def test_constraint_satisfaction_1000(capsys):
    """1,000 randomized reachable instances: every non-fallback output
    contains all constraint phrases contiguously. Budget: < 60 s."""
    rng = np.random.default_rng(0)
    vocab = Vocabulary(["a", "b", "c", "d"])
    content = [i for i in range(len(vocab))
               if i not in (vocab.bos_id, vocab.eos_id, vocab.unk_id)]
    t0 = time.perf_counter()
    violations = 0
    fallbacks = 0
    for _ in range(1000):
        model = random_table_model(vocab, rng)
        phrases = []
        seen = set()
        total = 0
        for _ in range(int(rng.integers(1, 3))):
            toks = tuple(int(rng.choice(content))
                         for _ in range(int(rng.integers(1, 4))))
            if toks not in seen:
                seen.add(toks)
                phrases.append(ConstraintPhrase(toks))
                total += len(toks)
        cs = ConstraintSet(phrases)
        cfg = DecodeConfig(
            beam_size=int(rng.integers(4, 9)),
            max_length=total + int(rng.integers(2, 5)),
        )
        r = dba_decode(model, cs, cfg)
        if r.fallback_used:
            fallbacks += 1
            continue
        if not all(contains_phrase(r.tokens[:-1], p) for p in cs):
            violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60.0
    report(capsys, ok, "constraint satisfaction (1000 instances)",
           f"{violations} violations, {fallbacks} fallbacks, {elapsed:.1f}s")


def test_unconstrained_equivalence_50(capsys):
    """dba_decode with an empty constraint set is bit-identical to
    beam_search on 50 random table models."""
    rng = np.random.default_rng(1)
    vocab = Vocabulary(["a", "b", "c"])
    mismatches = 0
    for _ in range(50):
        model = random_table_model(vocab, rng)
        cfg = DecodeConfig(beam_size=int(rng.integers(2, 7)),
                           max_length=int(rng.integers(3, 8)))
        a = beam_search(model, cfg)
        b = dba_decode(model, ConstraintSet([]), cfg)
        if (a.tokens, a.raw_logprob, a.normalized_score) != (
                b.tokens, b.raw_logprob, b.normalized_score):
            mismatches += 1
    report(capsys, mismatches == 0, "unconstrained equivalence (50 models)",
           f"{mismatches} mismatches")


def test_brute_force_oracle_equivalence_100(capsys):
    """100 instances, |V| small, max_length 4, beam 512: normalized score
    exactly equals the exhaustive constrained argmax. Budget: < 60 s.

    Constraint phrases are sampled token-disjoint (a partition of a token
    subset), where single-active-match tracking is exact. Overlapping /
    self-similar phrases can undercount partial progress by design; that
    behavior is pinned separately in the constraint-engine tests."""
    rng = np.random.default_rng(2)
    vocab = Vocabulary(["a", "b"])
    content = [i for i in range(len(vocab))
               if i not in (vocab.bos_id, vocab.eos_id)]
    t0 = time.perf_counter()
    mismatches = 0
    for trial in range(100):
        model = random_table_model(vocab, rng)
        pool = list(rng.permutation(content))
        phrases = []
        n_phrases = int(rng.integers(0, 3))
        for _ in range(n_phrases):
            if not pool:
                break
            size = int(rng.integers(1, len(pool) + 1))
            toks = tuple(int(t) for t in pool[:size])
            pool = pool[size:]
            phrases.append(ConstraintPhrase(toks))
        cs = ConstraintSet(phrases)
        alpha = float(trial % 2)
        cfg = DecodeConfig(beam_size=512, max_length=4,
                           length_penalty_alpha=alpha)
        got = dba_decode(model, cs, cfg)
        want = brute_force_best(model, cs, 4, alpha)
        if want is None:
            continue  # unsatisfiable in budget: fallback territory
        if got.fallback_used or got.tokens != want[1] or \
                abs(got.normalized_score - want[0]) > 1e-12:
            mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 60.0
    report(capsys, ok, "brute-force oracle equivalence (100 instances)",
           f"{mismatches} mismatches, {elapsed:.1f}s")


def test_beam_size_trend(capsys):
    """On 200 constrained n-gram instances, mean normalized score strictly
    increases over beams 5 -> 10 -> 20 and per-instance non-decrease holds
    in >= 90% of cases. candidates_per_hyp pinned to 5 across beams so the
    candidate pool does not widen with the beam."""
    records = synthetic_corpus(240, seed=0)
    beams = (5, 10, 20)
    scores = {b: [] for b in beams}
    collected = 0
    for rec in records:
        if collected >= 200:
            break
        model = train_document_model(rec)
        base_cfg = DecodeConfig(beam_size=5, max_length=20,
                                candidates_per_hyp=5)
        s_prime = beam_search(model, base_cfg)
        cs = derive_ner_miss(rec, list(s_prime.tokens[:-1]))
        if not cs:
            continue
        collected += 1
        for b in beams:
            cfg = DecodeConfig(beam_size=b, max_length=20,
                               candidates_per_hyp=5)
            scores[b].append(dba_decode(model, cs, cfg).normalized_score)
    means = [float(np.mean(scores[b])) for b in beams]
    non_decrease = sum(
        1 for a, b, c in zip(scores[5], scores[10], scores[20])
        if b >= a - 1e-12 and c >= b - 1e-12
    )
    frac = non_decrease / collected
    ok = collected == 200 and means[0] < means[1] < means[2] and frac >= 0.9
    report(capsys, ok, "beam-size trend (200 instances)",
           f"means {means[0]:.5f} < {means[1]:.5f} < {means[2]:.5f}, "
           f"non-decrease {100 * frac:.1f}%")


def test_o1_scaling_and_time_ratio_shape(capsys):
    """Median decode time at C_total=8 is <= 2.5x C_total=1 at beam 10,
    and the constrained/unconstrained time ratio grows with beam size
    (5 -> 10 -> 20; 2% multiplicative noise allowance per step, strict
    growth overall). Cold model caches; candidates_per_hyp pinned to 5."""
    records = synthetic_corpus(100, seed=42)
    rep = bench_decode(records, beam_sizes=[5, 10, 20],
                       constraint_counts=[0, 1, 8], max_length=30,
                       reps=7, candidates_per_hyp=5)
    times = {(r.beam_size, r.c_total): r.median_time for r in rep.rows}
    scaling = times[(10, 8)] / times[(10, 1)]
    ratios = [times[(b, 8)] / times[(b, 0)] for b in (5, 10, 20)]
    shape_ok = (ratios[1] >= ratios[0] * 0.98
                and ratios[2] >= ratios[1] * 0.98
                and ratios[2] > ratios[0])
    ok = scaling <= 2.5 and shape_ok
    report(capsys, ok, "O(1)-in-constraints scaling + time-ratio shape",
           f"C8/C1 at beam 10 = {scaling:.2f} (<= 2.5); "
           f"C8/C0 ratios beams 5/10/20 = "
           f"{ratios[0]:.2f}/{ratios[1]:.2f}/{ratios[2]:.2f}")


def test_end_to_end_direction(capsys):
    """On 500 synthetic records: R-2(phr4) >= R-2(none) + 5 points;
    ordering phr4 > NER-miss > none on R-2; the random-append baseline
    scores strictly below constrained decoding on R-L for the same
    constraints. Budget: < 300 s."""
    t0 = time.perf_counter()
    records = synthetic_corpus(500, seed=0)
    r2 = {}
    for mode in ("none", "strategy:NER-miss", "strategy:phr4"):
        rep = run_experiment(records, ExperimentConfig(mode=mode, seed=0))
        r2[mode] = rep.aggregates["rouge_final"]["rouge2"]

    # append baseline vs constrained decoding, same phr4 constraints
    append_rl, cas_rl = [], []
    dc = DecodeConfig(beam_size=5, max_length=20)
    for rec in records:
        model = train_document_model(rec)
        s_prime = beam_search(model, dc)
        cfg = StrategyConfig(strategy="phr4", seed=0)
        cs = ground_truth_constraints(
            rec.reference_ids, list(s_prime.tokens[:-1]), rec.document_ids,
            None, cfg, rec.vocab, raw_reference=rec.reference,
        )
        if not cs:
            continue
        appended = append_baseline(s_prime, cs)
        constrained = dba_decode(model, cs, dc)
        append_rl.append(
            rouge_l(appended.tokens[:-1], rec.reference_ids).f1
        )
        cas_rl.append(
            rouge_l(constrained.tokens[:-1], rec.reference_ids).f1
        )
    mean_append = 100 * float(np.mean(append_rl))
    mean_cas = 100 * float(np.mean(cas_rl))
    elapsed = time.perf_counter() - t0

    gain = r2["strategy:phr4"] - r2["none"]
    ordering = r2["strategy:phr4"] > r2["strategy:NER-miss"] > r2["none"]
    ok = (gain >= 5.0 and ordering and mean_cas > mean_append
          and elapsed < 300.0)
    report(capsys, ok, "end-to-end direction (500 records)",
           f"R-2 none/NER-miss/phr4 = {r2['none']}/{r2['strategy:NER-miss']}"
           f"/{r2['strategy:phr4']} (gain {gain:.2f} >= 5); "
           f"R-L append {mean_append:.2f} < CAS {mean_cas:.2f}; "
           f"{elapsed:.0f}s")


def test_rouge_correctness_and_significance(capsys):
    """Hand-derived ROUGE fixtures exact; identical pair scores 100.00;
    paired bootstrap on +10-shifted scores gives p < 0.01 (n=1000),
    stable across repeated runs with the same seed."""
    the, cat, sat, ate = 0, 1, 2, 3
    checks = [
        rouge_n([the, cat, sat], [the, cat, ate], 1).f1 == pytest.approx(2 / 3),
        rouge_n([the, cat, sat], [the, cat, ate], 2).f1 == pytest.approx(1 / 2),
        rouge_l([the, cat, sat], [the, cat, ate]).f1 == pytest.approx(2 / 3),
        corpus_rouge([([the, cat], [the, cat])])
        == {"rouge1": 100.0, "rouge2": 100.0, "rougeL": 100.0},
    ]
    rng = np.random.default_rng(3)
    b = rng.random(100)
    a = b + 10.0
    p1 = paired_bootstrap(a, b, n_resamples=1000, seed=5)
    p2 = paired_bootstrap(a, b, n_resamples=1000, seed=5)
    ok = all(checks) and p1.p_value < 0.01 and p1 == p2
    report(capsys, ok, "ROUGE correctness + significance",
           f"fixtures exact; bootstrap p = {p1.p_value} (< 0.01), seed-stable")


def test_constraint_source_contracts(capsys):
    """Every -miss constraint is absent from s'; every -src constraint is
    present in d; keyphrase filtering emits <= 3 phrases; the auto-kpe
    constrained-record fraction is within [5%, 20%] at the default
    min_score on the 500-record synthetic corpus."""
    records = synthetic_corpus(200, seed=7)
    dc = DecodeConfig(beam_size=5, max_length=20)
    miss_bad = src_bad = 0
    for rec in records[:60]:
        model = train_document_model(rec)
        s_prime = list(beam_search(model, dc).tokens[:-1])
        for strategy in ("NER-miss", "rand4-miss", "NER-miss-src",
                         "NER-NP-miss-src"):
            cs = ground_truth_constraints(
                rec.reference_ids, s_prime, rec.document_ids,
                EntityAnnotation.from_record_fields(
                    rec.entities, rec.noun_phrases, len(rec.reference_ids)
                ),
                StrategyConfig(strategy=strategy, seed=0), rec.vocab,
                raw_reference=rec.reference,
            )
            for p in cs:
                if contains_phrase(s_prime, p):
                    miss_bad += 1
                if "src" in strategy and not contains_phrase(
                        rec.document_ids, p):
                    src_bad += 1

    big = synthetic_corpus(500, seed=0)
    rep = run_experiment(big, ExperimentConfig(mode="auto-kpe", seed=0))
    frac = rep.aggregates["constrained_fraction"]
    size_ok = all(len(r.constraints) <= 3 for r in rep.rows)
    ok = (miss_bad == 0 and src_bad == 0 and size_ok
          and 0.05 <= frac <= 0.20)
    report(capsys, ok, "constraint-source contracts",
           f"miss violations {miss_bad}, src violations {src_bad}, "
           f"filter size <= 3: {size_ok}, constrained fraction "
           f"{100 * frac:.1f}% in [5%, 20%]")
