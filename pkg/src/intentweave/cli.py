"""Command-line entry points: generate, corpus, sft, analyze, validate, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analytics import (
    coverage_stats,
    coverage_to_csv,
    coverage_to_json,
    distribution_to_csv,
    distribution_to_json,
    intent_distribution,
    likert_summary,
    likert_to_csv,
    likert_to_json,
    usage_stats,
    usage_to_csv,
    usage_to_json,
)
from .annotations import AnnotationStore
from .gateway import GenerationConfig, LlmClient
from .model import IntentCategory, Severity
from .parser import parse_report
from .pipeline import (
    PipelineConfig,
    build_teacher_corpus,
    generate_report,
    iter_records,
)
from .prompts import PromptVariant
from .retrieval import CandidateSet, RetrievalConfig
from .serializer import SerializeMode, serialize_report
from .sft import EmitMode, corpus_to_jsonl
from .validate import validate_report

VARIANTS = {v.value: v for v in PromptVariant}


def _gateway_config(args) -> GenerationConfig:
    overrides = {"model_name": args.model}
    if args.base_url:
        overrides["base_url"] = args.base_url
    if args.temperature is not None:
        overrides["temperature"] = args.temperature
    if args.max_output_tokens is not None:
        overrides["max_output_tokens"] = args.max_output_tokens
    return GenerationConfig.from_env(**overrides)


def _add_gateway_args(parser):
    parser.add_argument("--model", default="", help="model name sent to the endpoint")
    parser.add_argument("--base-url", default="",
                        help="chat endpoint base URL (default: $LLM_BASE_URL)")
    parser.add_argument("--temperature", type=float, default=None)
    parser.add_argument("--max-output-tokens", type=int, default=None)


def _pipeline_config(args) -> PipelineConfig:
    retrieval = None
    if args.cache_dir:
        retrieval = RetrievalConfig(cache_dir=Path(args.cache_dir))
    return PipelineConfig(
        gateway=_gateway_config(args),
        retrieval=retrieval,
        variant=VARIANTS[args.variant],
        preplan=args.preplan,
        max_in_flight=getattr(args, "max_in_flight", 4),
    )


def cmd_generate(args) -> int:
    config = _pipeline_config(args)
    candidate_set = None
    if args.candidates_file:
        candidate_set = CandidateSet.from_dict(
            json.loads(Path(args.candidates_file).read_text(encoding="utf-8"))
        )
    record = generate_report(
        args.query, VARIANTS[args.variant], config, candidate_set=candidate_set
    )
    payload = json.dumps(record.to_dict(), ensure_ascii=False, indent=2)
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        print(payload)
    return 0


def cmd_corpus(args) -> int:
    queries = [
        line.strip()
        for line in Path(args.queries).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    config = _pipeline_config(args)
    records = build_teacher_corpus(
        queries, VARIANTS[args.variant], config, Path(args.out)
    )
    print(f"corpus: {len(records)} records in {args.out}")
    return 0


def cmd_sft(args) -> int:
    records = list(iter_records(Path(args.in_dir)))
    count = corpus_to_jsonl(records, EmitMode(args.mode), Path(args.out))
    print(f"sft: wrote {count} examples to {args.out}")
    return 0


def _emit(args, as_json: str, as_csv: str):
    text = as_json if args.format == "json" else as_csv
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def cmd_analyze(args) -> int:
    if args.stat == "dist":
        reports = [r.parsed for r in iter_records(Path(args.in_dir))]
        category = IntentCategory(args.category)
        dist = intent_distribution(reports, category)
        _emit(args, distribution_to_json(dist), distribution_to_csv(dist))
        return 0
    if args.stat == "usage":
        items = {}
        for record in iter_records(Path(args.in_dir)):
            candidate_set = CandidateSet(
                query_id=record.query_id,
                query=record.query,
                candidates=record.candidates,
            )
            if len(candidate_set):
                items[record.query_id] = (record.parsed, candidate_set)
        stats = usage_stats(items)
        _emit(args, usage_to_json(stats), usage_to_csv(stats))
        return 0
    if args.stat == "coverage":
        reference = {
            r.query_id: r.parsed for r in iter_records(Path(args.reference))
        }
        items = {}
        for record in iter_records(Path(args.in_dir)):
            if record.query_id in reference:
                items[record.query_id] = (record.parsed, reference[record.query_id])
        stats = coverage_stats(items)
        _emit(args, coverage_to_json(stats), coverage_to_csv(stats))
        return 0
    # likert
    records = AnnotationStore(Path(args.annotations)).load()
    summary = likert_summary(records, args.item_class)
    _emit(args, likert_to_json(summary), likert_to_csv(summary))
    return 0


def cmd_validate(args) -> int:
    raw = Path(args.in_file).read_text(encoding="utf-8")
    report = parse_report(raw)
    diagnostics = validate_report(report, args.candidates)
    for diag in diagnostics:
        print(diag)
    errors = [d for d in diagnostics if d.severity is Severity.ERROR]
    print(
        f"validate: {len(report.sections)} sections, "
        f"{len(diagnostics)} diagnostics, {len(errors)} errors"
    )
    return 2 if errors else 0


def cmd_strip(args) -> int:
    raw = Path(args.in_file).read_text(encoding="utf-8")
    report = parse_report(raw)
    print(serialize_report(report, SerializeMode(args.mode)), end="")
    return 0


def cmd_serve(args) -> int:
    from .server import make_server

    server = make_server(
        Path(args.reports),
        Path(args.annotations),
        condition=args.condition,
        static_dir=Path(args.static) if args.static else None,
        host=args.host,
        port=args.port,
        verbose=True,
    )
    host, port = server.server_address
    print(f"serving on http://{host}:{port} (condition: {args.condition})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intentweave",
        description="intent-annotated report generation, analysis, and serving",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate one report")
    p.add_argument("--query", required=True)
    p.add_argument("--variant", choices=sorted(VARIANTS), default="both")
    p.add_argument("--cache-dir", default="", help="retrieval cache directory")
    p.add_argument("--candidates-file", default="",
                   help="frozen CandidateSet JSON instead of live retrieval")
    p.add_argument("--preplan", action="store_true")
    p.add_argument("--out", default="")
    _add_gateway_args(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("corpus", help="batch-generate a teacher corpus")
    p.add_argument("--queries", required=True, help="file with one query per line")
    p.add_argument("--variant", choices=sorted(VARIANTS), default="both")
    p.add_argument("--out", required=True)
    p.add_argument("--cache-dir", default="")
    p.add_argument("--preplan", action="store_true")
    p.add_argument("--max-in-flight", type=int, default=4)
    _add_gateway_args(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("sft", help="emit SFT JSONL from a corpus")
    p.add_argument("--mode", choices=[m.value for m in EmitMode], required=True)
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sft)

    p = sub.add_parser("analyze", help="behavioral statistics")
    analyze_sub = p.add_subparsers(dest="stat", required=True)

    d = analyze_sub.add_parser("dist", help="intent type distribution")
    d.add_argument("--in", dest="in_dir", required=True)
    d.add_argument("--category", choices=["citation", "paragraph"], required=True)
    d.add_argument("--format", choices=["json", "csv"], default="json")
    d.add_argument("--out", default="")
    d.set_defaults(func=cmd_analyze)

    u = analyze_sub.add_parser("usage", help="candidate usage fractions")
    u.add_argument("--in", dest="in_dir", required=True)
    u.add_argument("--format", choices=["json", "csv"], default="json")
    u.add_argument("--out", default="")
    u.set_defaults(func=cmd_analyze)

    c = analyze_sub.add_parser("coverage", help="citation coverage vs reference")
    c.add_argument("--in", dest="in_dir", required=True)
    c.add_argument("--reference", required=True)
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.add_argument("--out", default="")
    c.set_defaults(func=cmd_analyze)

    l = analyze_sub.add_parser("likert", help="reader-study rating summary")
    l.add_argument("--annotations", required=True)
    l.add_argument("--class", dest="item_class",
                   choices=["paragraph", "citation"], required=True)
    l.add_argument("--format", choices=["json", "csv"], default="json")
    l.add_argument("--out", default="")
    l.set_defaults(func=cmd_analyze)

    p = sub.add_parser("validate", help="parse and validate a raw report file")
    p.add_argument("--in", dest="in_file", required=True)
    p.add_argument("--candidates", type=int, default=0,
                   help="size of the candidate set the report cites into")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="reserialize a raw report in a mode")
    p.add_argument("--in", dest="in_file", required=True)
    p.add_argument("--mode", choices=[m.value for m in SerializeMode],
                   default="stripped")
    p.set_defaults(func=cmd_strip)

    p = sub.add_parser("serve", help="run the reader-study HTTP service")
    p.add_argument("--reports", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--condition", choices=["baseline", "intent"], default="intent")
    p.add_argument("--static", default="", help="built frontend directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8340)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
