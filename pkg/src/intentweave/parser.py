"""Diagnostics-emitting parser for intent-annotated report text.

The parser is total: any byte-valid text yields a Report, never an
exception. Malformed markup is recovered with documented rules, each
recovery emitting a warning diagnostic:

* an unclosed begin tag ends at the next tag literal or paragraph end,
  whichever comes first (``UNCLOSED_TAG``);
* a begin tag inside an open span is kept as literal rationale text
  (``NESTED_TAG``), not a new span;
* a close tag with no open span is dropped (``ORPHAN_CLOSE_TAG``);
* text before the first ``SECTION;`` marker becomes an implicit untitled
  section (``IMPLICIT_SECTION``);
* a section without a ``TLDR;`` marker gets an empty tldr
  (``MISSING_TLDR``).

Tag literals never survive into parsed text fields, so serializing in
any mode cannot reintroduce them.
"""

from __future__ import annotations

from typing import Callable, Optional

from . import scanner
from .labels import normalize_intent_label
from .model import (
    CitationRef,
    CitedClaim,
    Diagnostic,
    IntentCategory,
    IntentSpan,
    Paragraph,
    PlainText,
    Report,
    Section,
    Severity,
)
from .textutil import normalize_ws, smart_join

_OPEN_TO_CLOSE = {scanner.K_BCIT: scanner.K_ECIT, scanner.K_BPIT: scanner.K_EPIT}
_OPEN_TO_CATEGORY = {
    scanner.K_BCIT: IntentCategory.CITATION,
    scanner.K_BPIT: IntentCategory.PARAGRAPH,
}
_ALL_TAGS = (scanner.K_BCIT, scanner.K_ECIT, scanner.K_BPIT, scanner.K_EPIT)
# Tokens that end the current paragraph region.
_REGION_END = (scanner.K_BREAK, scanner.K_SECTION)


class _ParagraphBuilder:
    """Accumulates segments; groups citation intents and markers into claims.

    A claim stays "open" while only whitespace separates it from the next
    citation marker or citation-intent span; any prose closes it.
    """

    def __init__(self, warn: Callable[[str, str, tuple], None]):
        self._warn = warn
        self.paragraph_intent: Optional[IntentSpan] = None
        self.segments: list = []
        self._pending: list[str] = []
        self._claim: Optional[dict] = None

    def has_content(self) -> bool:
        return bool(self.segments or self._pending or self._claim)

    def is_empty(self) -> bool:
        return not self.has_content() and self.paragraph_intent is None

    def feed_text(self, piece: str):
        if not piece.strip():
            return  # whitespace keeps an open claim open
        if self._claim is not None:
            self._close_claim()
        self._pending.append(normalize_ws(piece))

    def _flush_pending(self) -> str:
        text = smart_join(self._pending)
        self._pending = []
        return text

    def _open_claim(self):
        self._claim = {"text": self._flush_pending(), "intents": [], "refs": []}

    def add_citation(self, ref: CitationRef):
        if self._claim is None:
            self._open_claim()
        self._claim["refs"].append(ref)

    def add_citation_intent(self, span: IntentSpan):
        if self._claim is None:
            self._open_claim()
        self._claim["intents"].append(span)

    def add_paragraph_intent(self, span: IntentSpan):
        if self.paragraph_intent is not None:
            self._warn(
                "EXTRA_PARAGRAPH_INTENT",
                "paragraph already has an intent; extra span dropped",
                span.source_range,
            )
            return
        if self.has_content():
            self._warn(
                "MISPLACED_PARAGRAPH_INTENT",
                "paragraph intent appears after paragraph content",
                span.source_range,
            )
        self.paragraph_intent = span

    def _close_claim(self):
        claim = self._claim
        self._claim = None
        if claim["intents"] and not claim["refs"]:
            self._warn(
                "INTENT_WITHOUT_CITATION",
                "citation intent is not followed by a citation marker",
                claim["intents"][-1].source_range,
            )
        self.segments.append(
            CitedClaim(
                text=claim["text"],
                citation_intents=tuple(claim["intents"]),
                citations=tuple(claim["refs"]),
            )
        )

    def finish(self) -> Optional[Paragraph]:
        if self._claim is not None:
            self._close_claim()
        text = self._flush_pending()
        if text:
            self.segments.append(PlainText(text))
        if not self.segments and self.paragraph_intent is None:
            return None
        return Paragraph(
            paragraph_intent=self.paragraph_intent, segments=tuple(self.segments)
        )


class _Parser:
    def __init__(self, text: str, tokenize_fn: Callable):
        self.text = text
        self.tokens = tokenize_fn(text)
        self.diagnostics: list[Diagnostic] = []
        self.sections: list[Section] = []
        # Current section state; title None means no section open.
        self.sec_title: Optional[str] = None
        self.sec_tldr: Optional[str] = None
        self.sec_implicit = False
        self.sec_paragraphs: list[Paragraph] = []
        self.para: Optional[_ParagraphBuilder] = None

    def warn(self, code: str, message: str, source_range: tuple):
        self.diagnostics.append(
            Diagnostic(Severity.WARNING, code, message, source_range)
        )

    # -- section/paragraph lifecycle ----------------------------------

    def _paragraph(self) -> _ParagraphBuilder:
        if self.para is None:
            self._ensure_section(0)
            self.para = _ParagraphBuilder(self.warn)
        return self.para

    def _ensure_section(self, pos: int):
        if self.sec_title is None:
            self.sec_title = ""
            self.sec_implicit = True
            self.warn(
                "IMPLICIT_SECTION",
                "content before the first SECTION; marker",
                (pos, pos),
            )

    def _close_paragraph(self):
        if self.para is None:
            return
        paragraph = self.para.finish()
        self.para = None
        if paragraph is not None:
            self.sec_paragraphs.append(paragraph)

    def _close_section(self, pos: int):
        self._close_paragraph()
        if self.sec_title is None:
            return
        if self.sec_tldr is None and not self.sec_implicit:
            self.warn("MISSING_TLDR", "section has no TLDR; marker", (pos, pos))
        if not self.sec_paragraphs and not self.sec_implicit:
            self.warn("EMPTY_SECTION", "section has no paragraphs", (pos, pos))
        self.sections.append(
            Section(
                title=self.sec_title,
                tldr=self.sec_tldr or "",
                paragraphs=tuple(self.sec_paragraphs),
            )
        )
        self.sec_title = None
        self.sec_tldr = None
        self.sec_implicit = False
        self.sec_paragraphs = []

    # -- span parsing ---------------------------------------------------

    def _parse_span(self, i: int) -> tuple[Optional[IntentSpan], int]:
        """Parse an intent span opened at token index i.

        Returns (span, next token index). The span's content is the raw
        slice between the tags; inner tokens stay literal text.
        """
        open_tok = self.tokens[i]
        category = _OPEN_TO_CATEGORY[open_tok[0]]
        close_kind = _OPEN_TO_CLOSE[open_tok[0]]

        close_idx = None
        j = i + 1
        while j < len(self.tokens):
            kind = self.tokens[j][0]
            if kind == close_kind:
                close_idx = j
                break
            if kind in _REGION_END:
                break
            j += 1

        if close_idx is not None:
            content_start, content_end = open_tok[2], self.tokens[close_idx][1]
            span_end = self.tokens[close_idx][2]
            for k in range(i + 1, close_idx):
                if self.tokens[k][0] in _ALL_TAGS:
                    self.warn(
                        "NESTED_TAG",
                        "tag inside an open intent span kept as literal text",
                        (self.tokens[k][1], self.tokens[k][2]),
                    )
            next_i = close_idx + 1
        else:
            # Recovery: span ends at the next tag literal or at the end of
            # the paragraph, whichever comes first; that token stays unconsumed.
            j = i + 1
            while j < len(self.tokens) and self.tokens[j][0] not in _ALL_TAGS \
                    and self.tokens[j][0] not in _REGION_END:
                j += 1
            content_start = open_tok[2]
            content_end = self.tokens[j][1] if j < len(self.tokens) else len(self.text)
            span_end = content_end
            self.warn(
                "UNCLOSED_TAG",
                f"{scanner.TAG_LITERALS[open_tok[0]]} has no matching close tag",
                (open_tok[1], span_end),
            )
            next_i = j

        raw_label, rationale = self._split_label(
            self.text[content_start:content_end], (open_tok[1], span_end)
        )
        if not rationale:
            self.warn(
                "EMPTY_RATIONALE",
                "intent span has an empty rationale",
                (open_tok[1], span_end),
            )
        span = IntentSpan(
            intent_type=normalize_intent_label(raw_label, category),
            rationale=rationale,
            raw_label=raw_label,
            source_range=(open_tok[1], span_end),
        )
        return span, next_i

    def _split_label(self, content: str, source_range: tuple) -> tuple[str, str]:
        stripped = content.lstrip()
        raw_label = ""
        rest = stripped
        if stripped.startswith("["):
            end = stripped.find("]")
            if end != -1:
                raw_label = stripped[1:end]
                rest = stripped[end + 1:]
            else:
                self.warn(
                    "MISSING_INTENT_LABEL",
                    "intent span has no closed [label]",
                    source_range,
                )
                rest = stripped[1:]
        else:
            self.warn(
                "MISSING_INTENT_LABEL",
                "intent span does not start with a [label]",
                source_range,
            )
        rest = rest.lstrip()
        if rest.startswith(":"):
            rest = rest[1:]
        return raw_label, normalize_ws(rest)

    # -- TLDR and title capture ------------------------------------------

    def _capture_line(self, start: int, i: int) -> tuple[str, int, int]:
        """Raw text from start to end of line; returns (text, cursor, next_i).

        Tokens inside the line are consumed: title text is kept verbatim.
        """
        eol = self.text.find("\n", start)
        if eol == -1:
            eol = len(self.text)
        while i < len(self.tokens) and self.tokens[i][1] < eol:
            i += 1
        return self.text[start:eol], eol, i

    def _capture_tldr(self, i: int) -> tuple[str, int, int]:
        """TLDR content: from after the marker to the end of the paragraph
        region or the first intent tag. Citation markers stay literal text;
        intent spans inside are dropped with a warning."""
        tok = self.tokens[i]
        cursor = tok[2]
        pieces: list[str] = []
        j = i + 1
        while j < len(self.tokens):
            t = self.tokens[j]
            kind = t[0]
            if kind in _REGION_END:
                break
            if kind in _OPEN_TO_CLOSE:  # open tag
                break
            if kind in (scanner.K_ECIT, scanner.K_EPIT):
                break
            pieces.append(self.text[cursor:t[2]])
            cursor = t[2]
            j += 1
        region_end = self.tokens[j][1] if j < len(self.tokens) else len(self.text)
        pieces.append(self.text[cursor:region_end])
        return normalize_ws("".join(pieces)), region_end, j

    # -- main loop --------------------------------------------------------

    def run(self) -> Report:
        text = self.text
        cursor = 0
        i = 0
        n = len(self.tokens)
        while i < n:
            tok = self.tokens[i]
            kind, start, end = tok[0], tok[1], tok[2]
            gap = text[cursor:start]
            if gap.strip():
                self._paragraph().feed_text(gap)
            elif self.para is not None:
                self.para.feed_text(gap)

            if kind == scanner.K_BREAK:
                self._close_paragraph()
                cursor, i = end, i + 1
            elif kind == scanner.K_SECTION:
                self._close_section(start)
                title, cursor, i = self._capture_line(end, i + 1)
                self.sec_title = normalize_ws(title)
                if not self.sec_title:
                    self.warn(
                        "EMPTY_SECTION_TITLE",
                        "SECTION; marker has no title text",
                        (start, end),
                    )
            elif kind == scanner.K_TLDR:
                if self.sec_tldr is None:
                    # First occurrence in the section (or preamble) is the tldr.
                    self._ensure_section(start)
                    self.sec_tldr, cursor, i = self._capture_tldr(i)
                else:
                    # Later occurrences are plain prose.
                    self._paragraph().feed_text(text[start:end])
                    cursor, i = end, i + 1
            elif kind in _OPEN_TO_CLOSE:
                span, i = self._parse_span(i)
                cursor = span.source_range[1]
                if span.category is IntentCategory.PARAGRAPH:
                    self._paragraph().add_paragraph_intent(span)
                else:
                    self._paragraph().add_citation_intent(span)
            elif kind in (scanner.K_ECIT, scanner.K_EPIT):
                self.warn(
                    "ORPHAN_CLOSE_TAG",
                    f"{scanner.TAG_LITERALS[kind]} without an open span",
                    (start, end),
                )
                cursor, i = end, i + 1
            elif kind == scanner.K_CITE:
                self._paragraph().add_citation(CitationRef.candidate(tok[3]))
                cursor, i = end, i + 1
            elif kind == scanner.K_MEMORY:
                self._paragraph().add_citation(CitationRef.memory(tok[3]))
                cursor, i = end, i + 1
            else:  # pragma: no cover - exhaustive over token kinds
                cursor, i = end, i + 1

        tail = text[cursor:]
        if tail.strip():
            self._paragraph().feed_text(tail)
        self._close_section(len(text))
        return Report(
            sections=tuple(self.sections),
            raw_text=text,
            diagnostics=tuple(self.diagnostics),
        )


def parse_report(raw: str, *, tokenize_fn: Optional[Callable] = None) -> Report:
    """Parse arbitrary text into a Report. Never raises on malformed input."""
    return _Parser(raw, tokenize_fn or scanner.tokenize).run()


def strip_intents(raw: str, *, tokenize_fn: Optional[Callable] = None) -> str:
    """Remove all intent tags and rationales from raw text. Idempotent."""
    from .serializer import SerializeMode, serialize_report

    return serialize_report(
        parse_report(raw, tokenize_fn=tokenize_fn), SerializeMode.STRIPPED
    )
