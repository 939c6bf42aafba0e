"""Command-line interface: decode, kpe, constraints, rouge, experiment,
bench, serve."""

from __future__ import annotations

import argparse
import json
import sys

from .bench import bench_decode
from .constraints import ConstraintSet
from .data import load_jsonl, save_jsonl, synthetic_corpus
from .decoding import DecodeConfig, dba_decode
from .experiment import (
    ExperimentConfig,
    emit_report,
    render_report,
    run_experiment,
    train_document_model,
)
from .keyphrases import KpeConfig, compute_idf, extract_keyphrases, filter_constraints
from .models import TableModel
from .rouge import corpus_rouge
from .strategies import EntityAnnotation, StrategyConfig, ground_truth_constraints
from .text import detokenize, split_text


def _load_config_file(path) -> dict:
    """Optional key=value config file; one pair per line, # comments."""
    values = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip().strip('"')
    return values


def _decode_config(args) -> DecodeConfig:
    return DecodeConfig(
        beam_size=args.beam_size,
        max_length=args.max_length,
        length_penalty_alpha=args.alpha,
        seed=args.seed,
    )


def _add_decode_flags(p, beam_default=5):
    p.add_argument("--beam-size", type=int, default=beam_default)
    p.add_argument("--max-length", type=int, default=20)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)


def _load_dataset(args):
    if args.synthetic:
        return synthetic_corpus(args.synthetic, seed=args.seed)
    if not args.dataset:
        sys.exit("error: provide --dataset PATH or --synthetic N")
    return load_jsonl(args.dataset)


def cmd_decode(args):
    model = TableModel.from_json(args.model)
    constraints = ConstraintSet.from_texts(
        json.loads(args.constraints), model.vocab
    )
    result = dba_decode(model, constraints, _decode_config(args),
                        trace=args.trace)
    out = result.to_dict()
    out["text"] = detokenize(result.tokens, model.vocab)
    if not args.trace:
        out.pop("bank_trace")
    print(json.dumps(out, indent=2))


def cmd_kpe(args):
    records = _load_dataset(args)
    idf = compute_idf(split_text(r.document) for r in records)
    cfg = KpeConfig(idf=idf, top_k=args.top_k, min_score=args.min_score)
    out = []
    for rec in records:
        cands = extract_keyphrases(rec.document_ids, cfg, rec.vocab)
        out.append({
            "id": rec.id,
            "keyphrases": [
                {
                    "text": detokenize(c.tokens, rec.vocab),
                    "score": round(c.score, 4),
                    "first_position": c.first_position,
                }
                for c in cands[:args.top_k * 3]
            ],
        })
    print(json.dumps(out, indent=2))


def cmd_constraints(args):
    records = _load_dataset(args)
    cfg = ExperimentConfig(mode=f"strategy:{args.strategy}", seed=args.seed)
    dc = cfg.effective_decode()
    out = []
    for rec in records:
        model = train_document_model(rec)
        from .decoding import beam_search

        s_prime = list(beam_search(model, dc).tokens[:-1])
        ann = None
        if rec.entities is not None or rec.noun_phrases is not None:
            ann = EntityAnnotation.from_record_fields(
                rec.entities, rec.noun_phrases, len(rec.reference_ids)
            )
        cs = ground_truth_constraints(
            rec.reference_ids, s_prime, rec.document_ids, ann,
            StrategyConfig(strategy=args.strategy, seed=args.seed),
            rec.vocab, raw_reference=rec.reference,
        )
        out.append({"id": rec.id, "constraints": cs.surface_texts(),
                    "c_total": cs.total_tokens})
    print(json.dumps(out, indent=2))


def cmd_rouge(args):
    def read_field(path, fieldname):
        vals = []
        with open(path, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    vals.append(json.loads(line)[fieldname])
        return vals

    cands = read_field(args.candidates, args.candidate_field)
    refs = read_field(args.references, args.reference_field)
    if len(cands) != len(refs):
        sys.exit("error: candidate and reference files differ in length")
    pairs = [(split_text(c), split_text(r)) for c, r in zip(cands, refs)]
    print(json.dumps(corpus_rouge(pairs), indent=2))


def cmd_experiment(args):
    records = _load_dataset(args)
    decode = None
    if args.beam_size:
        decode = DecodeConfig(beam_size=args.beam_size,
                              max_length=args.max_length,
                              length_penalty_alpha=args.alpha,
                              seed=args.seed)
    cfg = ExperimentConfig(
        mode=args.mode,
        model_spec=args.model_spec,
        decode=decode,
        seed=args.seed,
        workers=args.workers,
    )
    report = run_experiment(records, cfg)
    if args.output:
        emit_report(report, args.format, args.output)
        print(f"wrote {args.format} report to {args.output}")
        print(json.dumps(report.aggregates, indent=2))
    else:
        print(render_report(report, args.format))


def cmd_bench(args):
    records = _load_dataset(args)
    report = bench_decode(
        records,
        beam_sizes=[int(b) for b in args.beams.split(",")],
        constraint_counts=[int(c) for c in args.constraint_counts.split(",")],
        max_length=args.max_length,
        reps=args.reps,
    )
    csv_text = report.to_csv()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(csv_text)
        print(f"wrote {args.output}")
    else:
        print(csv_text, end="")


def cmd_synth(args):
    records = synthetic_corpus(args.n, seed=args.seed)
    save_jsonl(records, args.output)
    print(f"wrote {len(records)} records to {args.output}")


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(
        model_path=args.model,
        beam_size=args.beam_size,
        max_length=args.max_length,
        length_penalty_alpha=args.alpha,
    )
    uvicorn.run(app, host=args.host, port=args.port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casdec",
        description="Constrained summarization workbench",
    )
    parser.add_argument("--config", help="key=value config file applied as "
                                         "flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="constrained decode with a table model")
    p.add_argument("--model", required=True, help="TableModel JSON file")
    p.add_argument("--constraints", default="[]",
                   help="JSON list of constraint strings")
    p.add_argument("--trace", action="store_true",
                   help="include per-step bank occupancy")
    _add_decode_flags(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("kpe", help="rank document keyphrases")
    p.add_argument("--dataset")
    p.add_argument("--synthetic", type=int, default=0)
    p.add_argument("--top-k", type=int, default=3)
    p.add_argument("--min-score", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kpe)

    p = sub.add_parser("constraints", help="derive ground-truth constraints")
    p.add_argument("--dataset")
    p.add_argument("--synthetic", type=int, default=0)
    p.add_argument("--strategy", default="NER-miss")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_constraints)

    p = sub.add_parser("rouge", help="score candidates against references")
    p.add_argument("--candidates", required=True, help="JSONL file")
    p.add_argument("--references", required=True, help="JSONL file")
    p.add_argument("--candidate-field", default="summary")
    p.add_argument("--reference-field", default="reference")
    p.set_defaults(func=cmd_rouge)

    p = sub.add_parser("experiment", help="run a full experiment")
    p.add_argument("--dataset")
    p.add_argument("--synthetic", type=int, default=0)
    p.add_argument("--mode", default="none",
                   help="none | auto-kpe | strategy:<name>")
    p.add_argument("--model-spec", default="doc-ngram")
    p.add_argument("--beam-size", type=int, default=0,
                   help="0 = mode default (10 auto-kpe, 5 otherwise)")
    p.add_argument("--max-length", type=int, default=20)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output")
    p.add_argument("--format", default="json",
                   choices=["json", "csv", "markdown-table"])
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bench", help="decode-time benchmark, CSV output")
    p.add_argument("--dataset")
    p.add_argument("--synthetic", type=int, default=50)
    p.add_argument("--beams", default="5,10,20")
    p.add_argument("--constraint-counts", default="0,1,4,8")
    p.add_argument("--max-length", type=int, default=20)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="write a synthetic corpus JSONL")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", help="run the interactive session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--model", help="optional TableModel JSON (default: "
                                   "per-document n-gram)")
    p.add_argument("--beam-size", type=int, default=10)
    p.add_argument("--max-length", type=int, default=20)
    p.add_argument("--alpha", type=float, default=1.0)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = _load_config_file(args.config)
        for key, val in defaults.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr):
                current = getattr(args, attr)
                if isinstance(current, bool):
                    val = val.lower() in ("1", "true", "yes")
                elif isinstance(current, int):
                    val = int(val)
                elif isinstance(current, float):
                    val = float(val)
                setattr(args, attr, val)
    args.func(args)


if __name__ == "__main__":
    main()
