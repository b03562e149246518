"""JSON HTTP service feeding the reader interface.

Serves stored generation records as reading payloads (baseline or
intent-annotated), accepts Likert annotations into the append-only
store, and exports them. Optionally serves the built frontend as static
files from one directory. The report store is read-only while serving;
annotation appends go through the store's single writer.

Endpoints:
  GET  /api/reports
  GET  /api/reports/{id}?mode=baseline|intent
  POST /api/annotations
  GET  /api/annotations/export
  GET  /api/meta
"""

from __future__ import annotations

import json
import re
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .annotations import AnnotationError, AnnotationRecord, AnnotationStore, resolve_item
from .labels import canonical_label
from .model import CitedClaim, IntentSpan, Report
from .pipeline import GenerationRecord, iter_records

MODES = ("baseline", "intent")

_SENTENCE_END = re.compile(r"(?<=[.!?])\s")


def first_sentence(text: str) -> str:
    """Display heuristic: text up to the first sentence-ending punctuation."""
    parts = _SENTENCE_END.split(text.strip(), maxsplit=1)
    return parts[0] if parts else ""


def _intent_payload(span: IntentSpan) -> dict:
    return {
        "category": span.category.value,
        "kind": span.intent_type.kind,
        "label": span.label()
        or canonical_label(span.category.value, span.intent_type.kind),
        "rationale": span.rationale,
    }


class ReportStore:
    """Immutable view over a corpus directory; loaded once at startup."""

    def __init__(self, reports_dir: Path):
        self.reports_dir = Path(reports_dir)
        self._records: dict[str, GenerationRecord] = {}
        for record in iter_records(self.reports_dir):
            self._records[record.query_id] = record

    def list(self) -> list[dict]:
        return [
            {
                "report_id": record.query_id,
                "query": record.query,
                "variant": record.variant,
            }
            for _, record in sorted(self._records.items())
        ]

    def get(self, report_id: str) -> Optional[GenerationRecord]:
        return self._records.get(report_id)

    def __len__(self) -> int:
        return len(self._records)


def report_payload(record: GenerationRecord, mode: str) -> dict:
    """Reading payload for one report.

    Baseline carries titles, TLDRs, first sentences, full bodies for
    unfolding, and citation snippets; intent mode additionally carries
    paragraph intents and per-citation intents. Candidate snippets are
    keyed by index in both modes.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    intent_mode = mode == "intent"
    report: Report = record.parsed
    by_index = {c.index: c for c in record.candidates}

    sections = []
    for s_idx, section in enumerate(report.sections):
        paragraphs = []
        for p_idx, paragraph in enumerate(section.paragraphs):
            citation_ordinal = 0
            segments = []
            for seg in paragraph.segments:
                if not isinstance(seg, CitedClaim):
                    segments.append({"type": "text", "text": seg.text})
                    continue
                citations = []
                for ref_pos, ref in enumerate(seg.citations):
                    candidate = None if ref.is_memory else by_index.get(ref.index)
                    entry = {
                        "ordinal": citation_ordinal,
                        "key": ref.marker(),
                        "index": ref.index,
                        "is_memory": ref.is_memory,
                        "title": candidate.title if candidate else None,
                        "snippet": (
                            (candidate.salient or candidate.snippet)
                            if candidate
                            else None
                        ),
                    }
                    if intent_mode and ref_pos < len(seg.citation_intents):
                        entry["intent"] = _intent_payload(
                            seg.citation_intents[ref_pos]
                        )
                    citations.append(entry)
                    citation_ordinal += 1
                segments.append(
                    {"type": "claim", "text": seg.text, "citations": citations}
                )
            body = paragraph.text()
            entry = {
                "id": f"s{s_idx}.p{p_idx}",
                "first_sentence": first_sentence(body),
                "text": body,
                "segments": segments,
            }
            if intent_mode and paragraph.paragraph_intent is not None:
                entry["intent"] = _intent_payload(paragraph.paragraph_intent)
            paragraphs.append(entry)
        sections.append(
            {
                "index": s_idx,
                "title": section.title,
                "tldr": section.tldr,
                "paragraphs": paragraphs,
            }
        )

    return {
        "report_id": record.query_id,
        "query": record.query,
        "variant": record.variant,
        "mode": mode,
        "sections": sections,
        "candidates": {
            str(c.index): {
                "paper_id": c.paper_id,
                "title": c.title,
                "snippet": c.salient or c.snippet,
                "citation_count": c.citation_count,
            }
            for c in record.candidates
        },
    }


_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    # -- plumbing --------------------------------------------------------

    def log_message(self, *args):
        if self.server.verbose:
            super().log_message(*args)

    def _send(self, status: int, body: bytes, content_type: str):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header(
            "Access-Control-Allow-Headers", "Content-Type"
        )
        self.end_headers()
        self.wfile.write(body)

    def _json(self, status: int, payload: dict):
        self._send(
            status,
            json.dumps(payload, ensure_ascii=False).encode("utf-8"),
            "application/json; charset=utf-8",
        )

    def _error(self, status: int, code: str, detail: str = ""):
        self._json(status, {"error": code, "detail": detail})

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- routes -----------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        if url.path == "/api/reports":
            self._json(200, {"reports": self.server.store.list()})
            return
        if url.path.startswith("/api/reports/"):
            report_id = url.path[len("/api/reports/"):]
            record = self.server.store.get(report_id)
            if record is None:
                self._error(404, "NOT_FOUND", f"no report {report_id!r}")
                return
            query = parse_qs(url.query)
            mode = query.get("mode", [self.server.condition])[0]
            if mode not in MODES:
                self._error(400, "VALIDATION_FAILED", f"bad mode {mode!r}")
                return
            self._json(200, report_payload(record, mode))
            return
        if url.path == "/api/annotations/export":
            self._send(
                200,
                self.server.annotations.export_jsonl().encode("utf-8"),
                "application/jsonl; charset=utf-8",
            )
            return
        if url.path == "/api/meta":
            self._json(
                200,
                {
                    "condition": self.server.condition,
                    "reports": len(self.server.store),
                },
            )
            return
        self._static(url.path)

    def do_POST(self):
        if urlparse(self.path).path != "/api/annotations":
            self._error(404, "NOT_FOUND")
            return
        try:
            length = int(self.headers.get("Content-Length", 0))
            payload = json.loads(self.rfile.read(length) or b"{}")
            record = AnnotationRecord.from_dict(payload)
        except (ValueError, KeyError, AnnotationError) as exc:
            self._error(400, "VALIDATION_FAILED", str(exc))
            return
        stored = self.server.store.get(record.report_id)
        if stored is None:
            self._error(400, "VALIDATION_FAILED",
                        f"unknown report {record.report_id!r}")
            return
        if not resolve_item(stored.parsed, record.item_id):
            self._error(400, "VALIDATION_FAILED",
                        f"item {record.item_id!r} not in report")
            return
        annotation_id = self.server.annotations.append(record)
        self._json(200, {"annotation_id": annotation_id, "stored": True})

    # -- static frontend ---------------------------------------------------

    def _static(self, path: str):
        root = self.server.static_dir
        if root is None:
            self._error(404, "NOT_FOUND")
            return
        relative = path.lstrip("/") or "index.html"
        target = (root / relative).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            self._error(404, "NOT_FOUND")
            return
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), content_type)


def make_server(
    reports_dir: Path,
    annotations_path: Path,
    condition: str = "intent",
    static_dir: Optional[Path] = None,
    host: str = "127.0.0.1",
    port: int = 8340,
    verbose: bool = False,
) -> ThreadingHTTPServer:
    """Build the HTTP server; caller runs serve_forever()."""
    if condition not in MODES:
        raise ValueError(f"condition must be one of {MODES}")
    server = ThreadingHTTPServer((host, port), _Handler)
    server.store = ReportStore(reports_dir)
    server.annotations = AnnotationStore(annotations_path)
    server.condition = condition
    server.static_dir = Path(static_dir) if static_dir else None
    server.verbose = verbose
    return server
