"""Mode-selectable canonical serialization of parsed reports.

Four modes: Full keeps every intent span; Stripped removes all of them;
ParagraphOnly and CitationOnly keep one category each. Citation markers
and section/TLDR markers survive every mode. Output is canonical: single
spaces around tags, one blank line between paragraphs, so serializing a
parse result is deterministic and re-parsing it is structure-preserving.
"""

from __future__ import annotations

from enum import Enum

from .model import CitedClaim, IntentSpan, Paragraph, Report, Section
from .textutil import smart_join


class SerializeMode(Enum):
    FULL = "full"
    STRIPPED = "stripped"
    PARAGRAPH_ONLY = "paragraph_only"
    CITATION_ONLY = "citation_only"


def _render_span(span: IntentSpan, open_tag: str, close_tag: str) -> str:
    head = f"{open_tag}[{span.label()}]:"
    return smart_join([head, span.rationale, close_tag])


def _render_claim(claim: CitedClaim, mode: SerializeMode) -> str:
    parts = [claim.text]
    if mode in (SerializeMode.FULL, SerializeMode.CITATION_ONLY):
        parts.extend(_render_span(s, "<bcit>", "<ecit>") for s in claim.citation_intents)
    parts.extend(ref.marker() for ref in claim.citations)
    return smart_join(parts)


def _render_paragraph(paragraph: Paragraph, mode: SerializeMode) -> str:
    parts = []
    if paragraph.paragraph_intent is not None and mode in (
        SerializeMode.FULL,
        SerializeMode.PARAGRAPH_ONLY,
    ):
        parts.append(_render_span(paragraph.paragraph_intent, "<bpit>", "<epit>"))
    for seg in paragraph.segments:
        if isinstance(seg, CitedClaim):
            parts.append(_render_claim(seg, mode))
        else:
            parts.append(seg.text)
    return smart_join(parts)


def _render_section(section: Section, mode: SerializeMode, first: bool) -> str:
    lines = []
    implicit = first and not section.title
    if not implicit:
        lines.append(f"SECTION; {section.title}".rstrip())
        lines.append(f"TLDR; {section.tldr}".rstrip())
    elif section.tldr:
        lines.append(f"TLDR; {section.tldr}")
    paragraphs = [
        text
        for text in (_render_paragraph(p, mode) for p in section.paragraphs)
        if text
    ]
    blocks = []
    if lines:
        blocks.append("\n".join(lines))
    blocks.extend(paragraphs)
    return "\n\n".join(blocks)


def serialize_report(report: Report, mode: SerializeMode = SerializeMode.FULL) -> str:
    blocks = [
        _render_section(sec, mode, first=(idx == 0))
        for idx, sec in enumerate(report.sections)
    ]
    body = "\n\n".join(block for block in blocks if block)
    return body + "\n" if body else ""
