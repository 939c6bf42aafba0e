"""Beam search and dynamically bank-allocated constrained beam search.

The constrained decoder splits the beam into banks indexed by the number
of constraint tokens a hypothesis has satisfied (0..C_total), unions
model top-k candidates with constraint-advancing tokens at every step,
and admits EOS only once every constraint phrase is present. Decoding
with an empty constraint set reduces exactly to plain beam search.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import kernels
from .constraints import (
    ConstraintSet,
    ConstraintState,
    ConstraintTrie,
    advance,
    build_trie,
    constraint_tokens,
    contains_phrase,
    unmet_phrases,
)
from .models import ScoringModel


@dataclass
class DecodeConfig:
    beam_size: int = 5
    max_length: int = 30
    length_penalty_alpha: float = 1.0
    seed: int = 0
    # per-hypothesis model candidates; None means beam_size
    candidates_per_hyp: int | None = None

    def __post_init__(self):
        if self.beam_size < 1:
            raise ValueError("beam_size must be >= 1")
        if self.max_length < 1:
            raise ValueError("max_length must be >= 1")
        if self.length_penalty_alpha < 0:
            raise ValueError("length_penalty_alpha must be >= 0")


@dataclass
class Hypothesis:
    tokens: tuple
    logprob: float
    cstate: ConstraintState
    finished: bool = False


@dataclass
class DecodeResult:
    tokens: tuple
    raw_logprob: float
    normalized_score: float
    satisfied: bool
    fallback_used: bool
    steps: int
    wall_time: float
    bank_trace: list | None = None

    def to_dict(self) -> dict:
        return {
            "tokens": list(self.tokens),
            "raw_logprob": self.raw_logprob,
            "normalized_score": self.normalized_score,
            "satisfied": self.satisfied,
            "fallback_used": self.fallback_used,
            "steps": self.steps,
            "wall_time": self.wall_time,
            "bank_trace": self.bank_trace,
        }


def length_normalized_score(logprob: float, length: int, alpha: float) -> float:
    """Google-NMT style length penalty: logprob / ((5+len)/6)^alpha."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return logprob / (((5.0 + length) / 6.0) ** alpha)


def allocate_banks(bank_candidate_counts, beam_size: int) -> list[int]:
    """Distribute beam slots across constraint banks.

    Start from an even split with the remainder going to the highest
    banks, then move every unusable slot (more slots than candidates in
    its bank) to the nearest bank whose candidates exceed its slots,
    preferring the higher-index bank on distance ties. Slots that cannot
    be used anywhere are parked with the nearest nonempty bank; selection
    clamps to the candidate count, so the beam shrinks when the total
    candidate count is below beam_size.
    """
    if beam_size < 1:
        raise ValueError("beam_size must be >= 1")
    counts = list(bank_candidate_counts)
    nbanks = len(counts)
    base, rem = divmod(beam_size, nbanks)
    slots = [base] * nbanks
    for j in range(nbanks - rem, nbanks):
        slots[j] += 1

    def nearest(b, pred):
        best = None
        for j in range(nbanks):
            if j == b or not pred(j):
                continue
            if best is None:
                best = j
                continue
            db, dj = abs(best - b), abs(j - b)
            if dj < db or (dj == db and j > best):
                best = j
        return best

    moved = True
    while moved:
        moved = False
        for b in range(nbanks):
            while slots[b] > counts[b]:
                target = nearest(b, lambda j: counts[j] > slots[j])
                if target is None:
                    break
                slots[b] -= 1
                slots[target] += 1
                moved = True
    for b in range(nbanks):
        excess = slots[b] - counts[b]
        if excess > 0:
            target = nearest(b, lambda j: counts[j] > 0)
            if target is not None:
                slots[b] -= excess
                slots[target] += excess
    return slots


def _pool_entry(tokens, logprob, alpha):
    norm = length_normalized_score(logprob, len(tokens), alpha)
    return (-norm, tokens, logprob)


def dba_decode(model: ScoringModel, constraints: ConstraintSet | None,
               config: DecodeConfig, trace: bool = False) -> DecodeResult:
    """Lexically constrained decode; every constraint phrase is present in
    the output (via search, or via the flagged append fallback)."""
    t0 = time.perf_counter()
    vocab = model.vocab
    if constraints is None:
        constraints = ConstraintSet([])
    trie = build_trie(constraints)
    c_total = trie.total_tokens
    alpha = config.length_penalty_alpha
    n_cand = config.candidates_per_hyp or config.beam_size

    beam = [Hypothesis((), 0.0, trie.initial_state())]
    last_beam = beam
    pool = []  # (-normalized, tokens, raw logprob)
    bank_trace = [] if trace else None
    steps = 0

    for _ in range(config.max_length):
        steps += 1
        candidates = {}  # tokens -> (logprob, state)
        for hyp in beam:
            lp = model.next_logprobs(list(hyp.tokens))
            cand = set(int(t) for t in kernels.topk_indices(lp, n_cand))
            cand |= constraint_tokens(hyp.cstate, trie)
            for tok in sorted(cand):
                if tok == vocab.bos_id:
                    continue
                new_lp = hyp.logprob + float(lp[tok])
                if tok == vocab.eos_id:
                    # EOS gate: only fully satisfied hypotheses may finish
                    if hyp.cstate.all_satisfied():
                        pool.append(
                            _pool_entry(hyp.tokens + (tok,), new_lp, alpha)
                        )
                    continue
                new_tokens = hyp.tokens + (tok,)
                prev = candidates.get(new_tokens)
                if prev is None or new_lp > prev[0]:
                    candidates[new_tokens] = (
                        new_lp,
                        advance(hyp.cstate, trie, tok),
                    )
        if not candidates:
            beam = []
            break

        buckets = [[] for _ in range(c_total + 1)]
        for tokens, (logprob, state) in candidates.items():
            bank = state.met_tokens(trie)
            norm = length_normalized_score(logprob, len(tokens), alpha)
            buckets[bank].append((-norm, tokens, logprob, state))
        counts = [len(b) for b in buckets]
        alloc = allocate_banks(counts, config.beam_size)
        beam = []
        occupancy = []
        for bank, bucket in enumerate(buckets):
            take = min(alloc[bank], counts[bank])
            occupancy.append(take)
            if take == 0:
                continue
            bucket.sort(key=lambda e: (e[0], e[1]))
            for neg_norm, tokens, logprob, state in bucket[:take]:
                beam.append(Hypothesis(tokens, logprob, state))
        if bank_trace is not None:
            bank_trace.append(occupancy)
        if beam:
            last_beam = beam
        else:
            break
        # Early termination: a live hypothesis can only add logprob <= 0,
        # so its best reachable normalized score is bounded by its current
        # logprob over the maximum length penalty. Strict comparison keeps
        # tie-breaking identical to exhaustive search.
        if pool:
            best_norm = -min(pool)[0]
            bound = max(
                length_normalized_score(
                    h.logprob, config.max_length + 1, alpha
                )
                for h in beam
            )
            if best_norm > bound:
                beam = []
                break

    # Length budget exhausted: force-terminate satisfied survivors.
    for hyp in beam:
        if hyp.cstate.all_satisfied():
            lp = model.next_logprobs(list(hyp.tokens))
            pool.append(
                _pool_entry(
                    hyp.tokens + (vocab.eos_id,),
                    hyp.logprob + float(lp[vocab.eos_id]),
                    alpha,
                )
            )

    fallback_used = False
    if pool:
        neg_norm, tokens, raw_lp = min(pool)
        norm = -neg_norm
    else:
        # No satisfying completion in budget: take the best hypothesis in
        # the highest bank and append its unmet constraint phrases.
        fallback_used = True
        source = beam or last_beam
        best, best_key, best_bank = None, None, -1
        for hyp in source:
            bank = hyp.cstate.met_tokens(trie)
            key = (
                -length_normalized_score(
                    hyp.logprob, max(len(hyp.tokens), 1), alpha
                ),
                hyp.tokens,
            )
            if bank > best_bank or (bank == best_bank and key < best_key):
                best, best_key, best_bank = hyp, key, bank
        tokens = best.tokens
        raw_lp = best.logprob
        for phrase in unmet_phrases(best.cstate, trie):
            for tok in phrase.tokens:
                lp = model.next_logprobs(list(tokens))
                raw_lp += float(lp[tok])
                tokens = tokens + (tok,)
        lp = model.next_logprobs(list(tokens))
        raw_lp += float(lp[vocab.eos_id])
        tokens = tokens + (vocab.eos_id,)
        norm = length_normalized_score(raw_lp, len(tokens), alpha)

    content = tokens[:-1]
    satisfied = all(contains_phrase(content, p) for p in constraints)
    return DecodeResult(
        tokens=tokens,
        raw_logprob=raw_lp,
        normalized_score=norm,
        satisfied=satisfied,
        fallback_used=fallback_used,
        steps=steps,
        wall_time=time.perf_counter() - t0,
        bank_trace=bank_trace,
    )


def beam_search(model: ScoringModel, config: DecodeConfig,
                trace: bool = False) -> DecodeResult:
    """Unconstrained beam search (the constrained decoder with C = empty)."""
    return dba_decode(model, ConstraintSet([]), config, trace=trace)


def append_baseline(unconstrained: DecodeResult, constraints: ConstraintSet,
                    alpha: float = 1.0) -> DecodeResult:
    """Random-insertion baseline: constraint phrases appended to the end
    of the unconstrained output, in input order."""
    eos = unconstrained.tokens[-1] if unconstrained.tokens else None
    content = list(unconstrained.tokens)
    if content and content[-1] == eos:
        content = content[:-1]
    for phrase in constraints:
        content.extend(phrase.tokens)
    tokens = tuple(content) + ((eos,) if eos is not None else ())
    norm = length_normalized_score(
        unconstrained.raw_logprob, max(len(tokens), 1), alpha
    )
    return DecodeResult(
        tokens=tokens,
        raw_logprob=unconstrained.raw_logprob,
        normalized_score=norm,
        satisfied=True,
        fallback_used=True,
        steps=unconstrained.steps,
        wall_time=unconstrained.wall_time,
        bank_trace=None,
    )
