"""Query-to-report orchestration and batch teacher-corpus generation.

``generate_report`` runs one query through candidates, prompt,
completion, parse, and validation; ``build_teacher_corpus`` runs a query
list with bounded parallelism, one JSON record file per query, resumable
by directory scan, with per-query failures recorded as error files that
never abort the run.
"""

from __future__ import annotations

import json
import os
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from .gateway import GenerationConfig, LlmClient
from .model import (
    Diagnostic,
    Report,
    Severity,
    diagnostic_from_dict,
    diagnostic_to_dict,
    report_to_dict,
)
from .parser import parse_report
from .prompts import (
    PromptVariant,
    apply_preplan_ranking,
    build_generation_prompt,
    build_preplan_prompt,
    parse_preplan_response,
)
from .retrieval import (
    CandidateSet,
    RetrievalConfig,
    SearchClient,
    SnippetCandidate,
    assemble_candidates,
    query_id_for,
)
from .validate import validate_report

MANIFEST_NAME = "manifest.json"


@dataclass
class PipelineConfig:
    gateway: GenerationConfig
    retrieval: Optional[RetrievalConfig] = None
    variant: PromptVariant = PromptVariant.BOTH_INTENTS
    preplan: bool = False
    max_in_flight: int = 4
    retry_degenerate: bool = True


@dataclass
class GenerationRecord:
    """One query's full generation outcome, re-parseable from raw text."""

    query_id: str
    query: str
    variant: str
    candidate_set_ref: str
    candidates: tuple[SnippetCandidate, ...]
    raw_report: str
    parsed: Report
    diagnostics: tuple[Diagnostic, ...]
    config_snapshot: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "query": self.query,
            "variant": self.variant,
            "candidate_set_ref": self.candidate_set_ref,
            "candidates": [c.to_dict() for c in self.candidates],
            "raw_report": self.raw_report,
            "parsed": report_to_dict(self.parsed),
            "diagnostics": [diagnostic_to_dict(d) for d in self.diagnostics],
            "config": self.config_snapshot,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationRecord":
        raw = d["raw_report"]
        return cls(
            query_id=d["query_id"],
            query=d["query"],
            variant=d["variant"],
            candidate_set_ref=d.get("candidate_set_ref", ""),
            candidates=tuple(
                SnippetCandidate.from_dict(c) for c in d.get("candidates", [])
            ),
            raw_report=raw,
            parsed=parse_report(raw),
            diagnostics=tuple(
                diagnostic_from_dict(x) for x in d.get("diagnostics", [])
            ),
            config_snapshot=d.get("config", {}),
            provenance=d.get("provenance", {}),
        )


def _preplan(query, candidates, client):
    bundle = build_preplan_prompt(query, candidates)
    completion = client.complete(bundle)
    scores, diagnostics = parse_preplan_response(completion.response_text)
    reordered, ranking_diags = apply_preplan_ranking(candidates, scores)
    return reordered, diagnostics + ranking_diags


def generate_report(
    query: str,
    variant: PromptVariant,
    config: PipelineConfig,
    client: Optional[LlmClient] = None,
    candidate_set: Optional[CandidateSet] = None,
    search_client: Optional[SearchClient] = None,
) -> GenerationRecord:
    """Run one query end to end and return the full record.

    ``candidate_set`` short-circuits retrieval; otherwise the configured
    retrieval cache is used (and populated on a cold cache).
    """
    client = client or LlmClient(config.gateway)
    if candidate_set is None:
        if config.retrieval is None:
            raise ValueError("either candidate_set or config.retrieval is required")
        candidate_set = assemble_candidates(
            query,
            config.retrieval,
            client=search_client,
            completer=lambda bundle: client.complete(bundle).response_text,
        )

    candidates = list(candidate_set.candidates)
    extra_diags: list[Diagnostic] = []
    if config.preplan and candidates:
        candidates, preplan_diags = _preplan(query, candidates, client)
        extra_diags.extend(preplan_diags)

    bundle = build_generation_prompt(query, candidates, variant)
    completion = client.complete(bundle)
    raw = completion.response_text
    parsed = parse_report(raw)
    if not parsed.sections and config.retry_degenerate:
        completion = client.complete(bundle)
        raw = completion.response_text
        parsed = parse_report(raw)
    if not parsed.sections:
        extra_diags.append(
            Diagnostic(
                Severity.WARNING,
                "PARSE_DEGENERATE",
                "generated report parsed to zero sections",
                (0, 0),
            )
        )

    diagnostics = tuple(
        validate_report(parsed, len(candidates)) + extra_diags
    )
    return GenerationRecord(
        query_id=candidate_set.query_id,
        query=query,
        variant=PromptVariant(variant).value,
        candidate_set_ref=candidate_set.query_id,
        candidates=tuple(candidates),
        raw_report=raw,
        parsed=parsed,
        diagnostics=diagnostics,
        config_snapshot=config.gateway.snapshot(),
        provenance={
            "model": config.gateway.model_name,
            "variant": PromptVariant(variant).value,
            "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "preplan": config.preplan,
        },
    )


# -- corpus store -------------------------------------------------------


def record_path(out_dir: Path, query_id: str) -> Path:
    return Path(out_dir) / f"{query_id}.json"


def error_path(out_dir: Path, query_id: str) -> Path:
    return Path(out_dir) / f"{query_id}.error.json"


def _write_json(path: Path, payload: dict):
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True), encoding="utf-8"
    )
    os.replace(tmp, path)


def load_record(path: Path) -> GenerationRecord:
    return GenerationRecord.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def iter_records(out_dir: Path):
    """Completed records in query_id order."""
    out_dir = Path(out_dir)
    for path in sorted(out_dir.glob("*.json")):
        if path.name == MANIFEST_NAME or path.name.endswith(".error.json"):
            continue
        yield load_record(path)


def completed_query_ids(out_dir: Path) -> set[str]:
    out_dir = Path(out_dir)
    return {
        p.stem
        for p in out_dir.glob("*.json")
        if p.name != MANIFEST_NAME and not p.name.endswith(".error.json")
    }


def failed_query_ids(out_dir: Path) -> set[str]:
    return {p.name[: -len(".error.json")] for p in Path(out_dir).glob("*.error.json")}


def build_teacher_corpus(
    queries: Sequence[str],
    variant: PromptVariant,
    config: PipelineConfig,
    out_dir: Path,
    client: Optional[LlmClient] = None,
    candidate_provider: Optional[Callable[[str], CandidateSet]] = None,
    search_client: Optional[SearchClient] = None,
) -> list[GenerationRecord]:
    """Generate one record per query into ``out_dir``; resume by skipping
    query ids that already have a record file. Failures become
    ``<query_id>.error.json`` entries and the run continues. Returns every
    completed record in the corpus, including ones from earlier runs.
    """
    if not queries:
        raise ValueError("queries must be non-empty")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    client = client or LlmClient(config.gateway)
    done = completed_query_ids(out_dir)
    started = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())

    pending = []
    seen = set()
    for query in queries:
        query_id = query_id_for(query)
        if query_id in seen:
            continue
        seen.add(query_id)
        if query_id not in done:
            pending.append((query_id, query))

    def run_one(item):
        query_id, query = item
        try:
            candidate_set = (
                candidate_provider(query) if candidate_provider else None
            )
            record = generate_report(
                query,
                variant,
                config,
                client=client,
                candidate_set=candidate_set,
                search_client=search_client,
            )
            _write_json(record_path(out_dir, query_id), record.to_dict())
            return query_id, None
        except Exception as exc:
            _write_json(
                error_path(out_dir, query_id),
                {
                    "query_id": query_id,
                    "query": query,
                    "error": f"{type(exc).__name__}: {exc}",
                    "traceback": traceback.format_exc(),
                    "failed_at": time.strftime(
                        "%Y-%m-%dT%H:%M:%SZ", time.gmtime()
                    ),
                },
            )
            return query_id, exc

    failures = 0
    if pending:
        with ThreadPoolExecutor(max_workers=config.max_in_flight) as pool:
            for _, error in pool.map(run_one, pending):
                if error is not None:
                    failures += 1

    completed = completed_query_ids(out_dir)
    manifest = {
        "variant": PromptVariant(variant).value,
        "model": config.gateway.model_name,
        "started_at": started,
        "finished_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "requested": len(seen),
        "skipped_existing": len(seen) - len(pending),
        "completed": len(completed),
        "failed": len(failed_query_ids(out_dir)),
        "query_ids": sorted(completed),
    }
    _write_json(out_dir / MANIFEST_NAME, manifest)
    return list(iter_records(out_dir))
