"""Document model for intent-annotated multi-section reports.

A report is a list of sections; each section has a title, a TLDR, and
paragraphs. Paragraph content is a sequence of segments: plain text runs
and cited claims. A cited claim is a text run together with the citation
intent spans and citation references attached to it. Values are immutable
after construction and safe to share across threads.

Structural equality for round-trip testing goes through ``structure()``,
which drops source ranges, raw text, and diagnostics: those are tied to a
particular surface rendering, not to the document tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union

from .labels import (
    CITATION_KINDS,
    OTHER_KIND,
    PARAGRAPH_KINDS,
    canonical_label,
)


class IntentCategory(Enum):
    CITATION = "citation"
    PARAGRAPH = "paragraph"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class IntentType:
    """A normalized intent type: a schema kind, or Other with the raw label.

    ``kind`` is one of the schema kind names for the category, or
    ``"Other"``; in the latter case ``other_label`` preserves the label
    text verbatim as emitted by the model.
    """

    category: IntentCategory
    kind: str
    other_label: Optional[str] = None

    def __post_init__(self):
        if self.kind == OTHER_KIND:
            if self.other_label is None:
                raise ValueError("Other intent type requires other_label")
            return
        allowed = (
            CITATION_KINDS
            if self.category is IntentCategory.CITATION
            else PARAGRAPH_KINDS
        )
        if self.kind not in allowed:
            raise ValueError(
                f"kind {self.kind!r} is not a {self.category.value} kind"
            )
        if self.other_label is not None:
            raise ValueError("other_label only allowed for Other kind")

    @property
    def is_other(self) -> bool:
        return self.kind == OTHER_KIND


@dataclass(frozen=True)
class IntentSpan:
    """One tagged intent: normalized type, rationale, and raw surface form.

    ``source_range`` is the (start, end) offset pair of the whole span in
    the raw document the span was parsed from; constructed (non-parsed)
    spans use (0, 0).
    """

    intent_type: IntentType
    rationale: str
    raw_label: str = ""
    source_range: tuple[int, int] = (0, 0)

    @property
    def category(self) -> IntentCategory:
        return self.intent_type.category

    def label(self) -> str:
        """Surface label: the raw label if present, else the canonical one."""
        if self.raw_label:
            return self.raw_label
        return canonical_label(self.intent_type.category.value, self.intent_type.kind)

    def structure(self) -> tuple:
        return (
            self.intent_type.category.value,
            self.intent_type.kind,
            self.intent_type.other_label,
            self.raw_label,
            self.rationale,
        )


@dataclass(frozen=True)
class CitationRef:
    """A citation target: candidate index n >= 1, or the model's own memory.

    ``index`` is None for memory citations; ``memory_year`` is the year
    rendered inside the memory marker.
    """

    index: Optional[int]
    memory_year: Optional[int] = None

    def __post_init__(self):
        if self.index is None:
            if self.memory_year is None:
                raise ValueError("memory citation requires memory_year")
        else:
            if self.index < 1:
                raise ValueError("candidate index must be >= 1")
            if self.memory_year is not None:
                raise ValueError("memory_year only allowed for memory citations")

    @classmethod
    def candidate(cls, index: int) -> "CitationRef":
        return cls(index=index)

    @classmethod
    def memory(cls, year: int = 2025) -> "CitationRef":
        return cls(index=None, memory_year=year)

    @property
    def is_memory(self) -> bool:
        return self.index is None

    def marker(self) -> str:
        if self.is_memory:
            return f"[LLM MEMORY | {self.memory_year}]"
        return f"[{self.index}]"

    def structure(self) -> tuple:
        return (self.index, self.memory_year)


@dataclass(frozen=True)
class PlainText:
    text: str

    def structure(self) -> tuple:
        return ("text", self.text)


@dataclass(frozen=True)
class CitedClaim:
    """A text run with the citation intents and citations attached to it."""

    text: str
    citation_intents: tuple[IntentSpan, ...] = ()
    citations: tuple[CitationRef, ...] = ()

    def __post_init__(self):
        for span in self.citation_intents:
            if span.category is not IntentCategory.CITATION:
                raise ValueError("citation_intents must have citation category")

    def structure(self) -> tuple:
        return (
            "claim",
            self.text,
            tuple(s.structure() for s in self.citation_intents),
            tuple(c.structure() for c in self.citations),
        )


Segment = Union[PlainText, CitedClaim]


@dataclass(frozen=True)
class Paragraph:
    paragraph_intent: Optional[IntentSpan] = None
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        if (
            self.paragraph_intent is not None
            and self.paragraph_intent.category is not IntentCategory.PARAGRAPH
        ):
            raise ValueError("paragraph_intent must have paragraph category")

    def citations(self) -> list[CitationRef]:
        out = []
        for seg in self.segments:
            if isinstance(seg, CitedClaim):
                out.extend(seg.citations)
        return out

    def text(self) -> str:
        """Prose of the paragraph: segment texts, markup excluded."""
        from .textutil import smart_join

        return smart_join(seg.text for seg in self.segments)

    def structure(self) -> tuple:
        return (
            self.paragraph_intent.structure() if self.paragraph_intent else None,
            tuple(seg.structure() for seg in self.segments),
        )


@dataclass(frozen=True)
class Section:
    title: str
    tldr: str = ""
    paragraphs: tuple[Paragraph, ...] = ()

    def structure(self) -> tuple:
        return (
            self.title,
            self.tldr,
            tuple(p.structure() for p in self.paragraphs),
        )


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    source_range: tuple[int, int] = (0, 0)

    def __str__(self) -> str:
        return f"{self.severity.value}[{self.code}] @{self.source_range}: {self.message}"


@dataclass(frozen=True)
class Report:
    sections: tuple[Section, ...] = ()
    raw_text: str = ""
    diagnostics: tuple[Diagnostic, ...] = ()

    def paragraphs(self) -> Iterator[Paragraph]:
        for section in self.sections:
            yield from section.paragraphs

    def intent_spans(
        self, category: Optional[IntentCategory] = None
    ) -> Iterator[IntentSpan]:
        """All intent spans in document order, optionally one category."""
        for paragraph in self.paragraphs():
            pintent = paragraph.paragraph_intent
            if pintent is not None and category in (None, IntentCategory.PARAGRAPH):
                yield pintent
            for seg in paragraph.segments:
                if isinstance(seg, CitedClaim) and category in (
                    None,
                    IntentCategory.CITATION,
                ):
                    yield from seg.citation_intents

    def citations(self) -> list[CitationRef]:
        """All citation refs in document order, one traversal."""
        out = []
        for paragraph in self.paragraphs():
            out.extend(paragraph.citations())
        return out

    def candidate_indices(self) -> set[int]:
        """Distinct cited candidate indices; memory citations excluded."""
        return {ref.index for ref in self.citations() if ref.index is not None}

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.ERROR]

    def structure(self) -> tuple:
        return tuple(s.structure() for s in self.sections)


# --- JSON encoding -----------------------------------------------------
#
# Stable field names; see README "Report JSON schema".


def intent_span_to_dict(span: IntentSpan) -> dict:
    return {
        "category": span.intent_type.category.value,
        "kind": span.intent_type.kind,
        "other_label": span.intent_type.other_label,
        "raw_label": span.raw_label,
        "rationale": span.rationale,
        "source_range": list(span.source_range),
    }


def intent_span_from_dict(d: dict) -> IntentSpan:
    return IntentSpan(
        intent_type=IntentType(
            category=IntentCategory(d["category"]),
            kind=d["kind"],
            other_label=d.get("other_label"),
        ),
        rationale=d["rationale"],
        raw_label=d.get("raw_label", ""),
        source_range=tuple(d.get("source_range", (0, 0))),
    )


def citation_ref_to_dict(ref: CitationRef) -> dict:
    if ref.is_memory:
        return {"target": "memory", "year": ref.memory_year}
    return {"target": "candidate", "index": ref.index}


def citation_ref_from_dict(d: dict) -> CitationRef:
    if d["target"] == "memory":
        return CitationRef.memory(d.get("year", 2025))
    return CitationRef.candidate(d["index"])


def _segment_to_dict(seg: Segment) -> dict:
    if isinstance(seg, PlainText):
        return {"type": "text", "text": seg.text}
    return {
        "type": "claim",
        "text": seg.text,
        "citation_intents": [intent_span_to_dict(s) for s in seg.citation_intents],
        "citations": [citation_ref_to_dict(c) for c in seg.citations],
    }


def _segment_from_dict(d: dict) -> Segment:
    if d["type"] == "text":
        return PlainText(text=d["text"])
    return CitedClaim(
        text=d["text"],
        citation_intents=tuple(
            intent_span_from_dict(s) for s in d.get("citation_intents", [])
        ),
        citations=tuple(citation_ref_from_dict(c) for c in d.get("citations", [])),
    )


def diagnostic_to_dict(diag: Diagnostic) -> dict:
    return {
        "severity": diag.severity.value,
        "code": diag.code,
        "message": diag.message,
        "source_range": list(diag.source_range),
    }


def diagnostic_from_dict(d: dict) -> Diagnostic:
    return Diagnostic(
        severity=Severity(d["severity"]),
        code=d["code"],
        message=d["message"],
        source_range=tuple(d.get("source_range", (0, 0))),
    )


def report_to_dict(report: Report) -> dict:
    return {
        "sections": [
            {
                "title": sec.title,
                "tldr": sec.tldr,
                "paragraphs": [
                    {
                        "paragraph_intent": (
                            intent_span_to_dict(p.paragraph_intent)
                            if p.paragraph_intent
                            else None
                        ),
                        "segments": [_segment_to_dict(s) for s in p.segments],
                    }
                    for p in sec.paragraphs
                ],
            }
            for sec in report.sections
        ],
        "diagnostics": [diagnostic_to_dict(d) for d in report.diagnostics],
    }


def report_from_dict(d: dict, raw_text: str = "") -> Report:
    sections = []
    for sec in d.get("sections", []):
        paragraphs = []
        for p in sec.get("paragraphs", []):
            pintent = p.get("paragraph_intent")
            paragraphs.append(
                Paragraph(
                    paragraph_intent=(
                        intent_span_from_dict(pintent) if pintent else None
                    ),
                    segments=tuple(_segment_from_dict(s) for s in p.get("segments", [])),
                )
            )
        sections.append(
            Section(
                title=sec.get("title", ""),
                tldr=sec.get("tldr", ""),
                paragraphs=tuple(paragraphs),
            )
        )
    return Report(
        sections=tuple(sections),
        raw_text=raw_text,
        diagnostics=tuple(
            diagnostic_from_dict(x) for x in d.get("diagnostics", [])
        ),
    )
