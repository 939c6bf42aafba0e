"""Experiment orchestration: per-record decode, constraint derivation,
scoring, and report emission."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

from .constraints import ConstraintSet
from .data import DatasetRecord
from .decoding import DecodeConfig, beam_search, dba_decode
from .keyphrases import KpeConfig, compute_idf, extract_keyphrases, filter_constraints
from .models import NGramModel, TableModel, ngram_train
from .rouge import rouge_l, rouge_n
from .strategies import EntityAnnotation, StrategyConfig, ground_truth_constraints
from .text import detokenize, split_text

VALID_BASE_MODES = ("none", "auto-kpe")


@dataclass
class ExperimentConfig:
    mode: str = "none"                     # none | auto-kpe | strategy:<name>
    model_spec: str = "doc-ngram"          # doc-ngram[:order=N,lam=X] | table:<path>
    decode: DecodeConfig | None = None
    seed: int = 0
    kpe: KpeConfig | None = None
    workers: int = 1
    output_path: str | None = None

    def __post_init__(self):
        if self.mode not in VALID_BASE_MODES and not self.mode.startswith("strategy:"):
            raise ValueError(f"unknown experiment mode {self.mode!r}")

    def strategy_name(self) -> str | None:
        if self.mode.startswith("strategy:"):
            return self.mode.split(":", 1)[1]
        return None

    def effective_decode(self) -> DecodeConfig:
        if self.decode is not None:
            return self.decode
        # default beams: 10 with noisy (keyphrase) constraints, 5 otherwise
        beam = 10 if self.mode == "auto-kpe" else 5
        return DecodeConfig(beam_size=beam, max_length=20,
                            length_penalty_alpha=1.0, seed=self.seed)


def parse_model_spec(spec: str) -> dict:
    if spec.startswith("table:"):
        return {"kind": "table", "path": spec.split(":", 1)[1]}
    if spec.startswith("doc-ngram"):
        params = {"order": 3, "lam": 0.1}
        if ":" in spec:
            for kv in spec.split(":", 1)[1].split(","):
                key, val = kv.split("=")
                params[key] = float(val) if key == "lam" else int(val)
        return {"kind": "doc-ngram", **params}
    raise ValueError(f"unknown model spec {spec!r}")


def train_document_model(record: DatasetRecord, order: int = 3,
                         lam: float = 0.1) -> NGramModel:
    """Per-document n-gram model: the desk-scale stand-in for a
    document-conditioned summarizer."""
    sentences = [s + [record.vocab.eos_id] for s in record.document_sentences()]
    return ngram_train(sentences, order, lam, record.vocab)


@dataclass
class RecordRow:
    id: str
    s_prime: str
    constraints: list
    s: str | None
    satisfied: bool | None
    fallback_used: bool | None
    c_total: int
    rouge_s_prime: dict
    rouge_s: dict | None


@dataclass
class RunReport:
    mode: str
    model_spec: str
    seed: int
    beam_size: int
    rows: list
    aggregates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "model_spec": self.model_spec,
            "seed": self.seed,
            "beam_size": self.beam_size,
            "rows": [asdict(r) for r in self.rows],
            "aggregates": self.aggregates,
        }


def _score(candidate_ids, reference_ids) -> dict:
    return {
        "rouge1": rouge_n(candidate_ids, reference_ids, 1).f1,
        "rouge2": rouge_n(candidate_ids, reference_ids, 2).f1,
        "rougeL": rouge_l(candidate_ids, reference_ids).f1,
    }


def _derive_constraints(record: DatasetRecord, s_prime_ids, cfg: ExperimentConfig,
                        kpe: KpeConfig) -> ConstraintSet:
    strategy = cfg.strategy_name()
    if cfg.mode == "none":
        return ConstraintSet([])
    if cfg.mode == "auto-kpe":
        cands = extract_keyphrases(record.document_ids, kpe, record.vocab)
        return filter_constraints(cands, s_prime_ids, kpe, record.vocab)
    ann = None
    if record.entities is not None or record.noun_phrases is not None:
        ann = EntityAnnotation.from_record_fields(
            record.entities, record.noun_phrases, len(record.reference_ids)
        )
    scfg = StrategyConfig(strategy=strategy, seed=cfg.seed)
    return ground_truth_constraints(
        record.reference_ids, s_prime_ids, record.document_ids,
        ann, scfg, record.vocab, raw_reference=record.reference,
    )


def _process_record(args):
    record, cfg, kpe, dc = args
    spec = parse_model_spec(cfg.model_spec)
    if spec["kind"] == "doc-ngram":
        model = train_document_model(record, spec["order"], spec["lam"])
        vocab = record.vocab
    else:
        model = TableModel.from_json(spec["path"])
        vocab = model.vocab
    unconstrained = beam_search(model, dc)
    s_prime_ids = list(unconstrained.tokens[:-1])
    ref_ids = [vocab.id_of(t) for t in split_text(record.reference)]
    constraints = _derive_constraints(record, s_prime_ids, cfg, kpe)
    row = RecordRow(
        id=record.id,
        s_prime=detokenize(s_prime_ids, vocab),
        constraints=constraints.surface_texts(),
        s=None,
        satisfied=None,
        fallback_used=None,
        c_total=constraints.total_tokens,
        rouge_s_prime=_score(s_prime_ids, ref_ids),
        rouge_s=None,
    )
    if constraints:
        result = dba_decode(model, constraints, dc)
        s_ids = list(result.tokens[:-1])
        row.s = detokenize(s_ids, vocab)
        row.satisfied = result.satisfied
        row.fallback_used = result.fallback_used
        row.rouge_s = _score(s_ids, ref_ids)
    return row


def run_experiment(dataset, cfg: ExperimentConfig) -> RunReport:
    """Decode s' for every record, derive constraints per mode, decode s
    where the constraint set is nonempty, and score both against r."""
    dataset = list(dataset)
    if not dataset:
        raise ValueError("empty dataset")
    kpe = cfg.kpe
    if kpe is None:
        idf = compute_idf(split_text(r.document) for r in dataset)
        kpe = KpeConfig(idf=idf)
    dc = cfg.effective_decode()
    jobs = [(rec, cfg, kpe, dc) for rec in dataset]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_process_record, jobs, chunksize=8))
    else:
        rows = [_process_record(j) for j in jobs]

    n = len(rows)
    constrained = [r for r in rows if r.s is not None]

    def mean(vals):
        vals = list(vals)
        return round(sum(vals) / len(vals), 4) if vals else None

    def agg(key, use_s):
        scores = []
        for r in rows:
            src = r.rouge_s if (use_s and r.rouge_s is not None) else r.rouge_s_prime
            scores.append(src[key])
        return round(100.0 * sum(scores) / n, 2)

    aggregates = {
        "n_records": n,
        "n_constrained": len(constrained),
        "constrained_fraction": round(len(constrained) / n, 4),
        "mean_c_total": mean(r.c_total for r in constrained),
        "n_fallback": sum(1 for r in constrained if r.fallback_used),
        "rouge_unconstrained": {
            k: agg(k, use_s=False) for k in ("rouge1", "rouge2", "rougeL")
        },
        "rouge_final": {
            k: agg(k, use_s=True) for k in ("rouge1", "rouge2", "rougeL")
        },
    }
    if constrained:
        aggregates["rouge_constrained_subset"] = {
            "s_prime": {
                k: round(100.0 * sum(r.rouge_s_prime[k] for r in constrained)
                         / len(constrained), 2)
                for k in ("rouge1", "rouge2", "rougeL")
            },
            "s": {
                k: round(100.0 * sum(r.rouge_s[k] for r in constrained)
                         / len(constrained), 2)
                for k in ("rouge1", "rouge2", "rougeL")
            },
        }
    return RunReport(
        mode=cfg.mode,
        model_spec=cfg.model_spec,
        seed=cfg.seed,
        beam_size=dc.beam_size,
        rows=rows,
        aggregates=aggregates,
    )


CSV_COLUMNS = [
    "id", "s_prime", "constraints", "s", "satisfied", "fallback_used",
    "c_total", "r1_s_prime", "r2_s_prime", "rL_s_prime", "r1_s", "r2_s", "rL_s",
]


def render_report(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(CSV_COLUMNS)
        for r in report.rows:
            writer.writerow([
                r.id, r.s_prime, " | ".join(r.constraints), r.s or "",
                r.satisfied, r.fallback_used, r.c_total,
                r.rouge_s_prime["rouge1"], r.rouge_s_prime["rouge2"],
                r.rouge_s_prime["rougeL"],
                r.rouge_s["rouge1"] if r.rouge_s else "",
                r.rouge_s["rouge2"] if r.rouge_s else "",
                r.rouge_s["rougeL"] if r.rouge_s else "",
            ])
        return buf.getvalue()
    if fmt == "markdown-table":
        a = report.aggregates
        lines = [
            "| Mode | R-1 | R-2 | R-L | C |",
            "|---|---|---|---|---|",
            "| unconstrained | {rouge1} | {rouge2} | {rougeL} | - |".format(
                **a["rouge_unconstrained"]
            ),
            "| {mode} | {rouge1} | {rouge2} | {rougeL} | {c} |".format(
                mode=report.mode,
                c=a["mean_c_total"] if a["mean_c_total"] is not None else "-",
                **a["rouge_final"],
            ),
        ]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(report: RunReport, fmt: str, path) -> None:
    text = render_report(report, fmt)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
