"""Report validation against a candidate set, plus the diagnostic registry.

``validate_report`` re-checks a parsed report against the candidate set
it was generated from: citation indices in range, citation run lengths,
citation-free TLDRs, and schema-conforming intent labels. Parse-time
diagnostics are carried over, so the result is the full picture for one
report.
"""

from __future__ import annotations

import re

from .model import Diagnostic, Report, Severity

# Closed set of diagnostic codes. Code -> (severity, description).
DIAGNOSTIC_CODES = {
    # parser recovery
    "UNCLOSED_TAG": (Severity.WARNING, "begin tag with no matching close tag"),
    "NESTED_TAG": (Severity.WARNING, "tag inside an open intent span, kept as literal text"),
    "ORPHAN_CLOSE_TAG": (Severity.WARNING, "close tag with no open span, dropped"),
    "MISSING_INTENT_LABEL": (Severity.WARNING, "intent span without a [label]"),
    "EMPTY_RATIONALE": (Severity.WARNING, "intent span with an empty rationale"),
    "EXTRA_PARAGRAPH_INTENT": (Severity.WARNING, "more than one paragraph intent in a paragraph"),
    "MISPLACED_PARAGRAPH_INTENT": (Severity.WARNING, "paragraph intent after paragraph content"),
    "INTENT_WITHOUT_CITATION": (Severity.WARNING, "citation intent not followed by a citation marker"),
    "IMPLICIT_SECTION": (Severity.WARNING, "content before the first SECTION; marker"),
    "MISSING_TLDR": (Severity.WARNING, "section without a TLDR; marker"),
    "EMPTY_SECTION": (Severity.WARNING, "section without paragraphs"),
    "EMPTY_SECTION_TITLE": (Severity.WARNING, "SECTION; marker without title text"),
    # validator
    "CITE_RUN_TOO_LONG": (Severity.WARNING, "more than five citations in a row"),
    "CITE_OUT_OF_RANGE": (Severity.ERROR, "citation index beyond the candidate set"),
    "TLDR_HAS_CITATION": (Severity.WARNING, "citation marker inside a TLDR"),
    "UNKNOWN_INTENT_TYPE": (Severity.WARNING, "intent label outside the schema"),
    # pipeline
    "PARSE_DEGENERATE": (Severity.WARNING, "generated report parsed to zero sections"),
    # pre-planning
    "UNSCORED_CANDIDATE": (Severity.WARNING, "candidate missing from pre-plan scores"),
    "MALFORMED_PREPLAN": (Severity.WARNING, "pre-plan score payload not parseable"),
}

MAX_CITATION_RUN = 5

_TLDR_CITE = re.compile(
    r"\[(?:[Cc][Ii][Tt][Aa][Tt][Ii][Oo][Nn] )?[0-9]+\]|\[LLM MEMORY \| [0-9]+\]"
)


def validate_report(report: Report, candidate_count: int) -> list[Diagnostic]:
    """Validate a report against the size of its candidate set.

    Returns parse diagnostics carried over plus validator findings.
    """
    if candidate_count < 0:
        raise ValueError("candidate_count must be non-negative")
    out = list(report.diagnostics)

    for s_idx, section in enumerate(report.sections):
        if _TLDR_CITE.search(section.tldr):
            out.append(
                Diagnostic(
                    Severity.WARNING,
                    "TLDR_HAS_CITATION",
                    f"section {s_idx + 1} TLDR contains a citation marker",
                    (0, 0),
                )
            )

    for paragraph in report.paragraphs():
        for seg in paragraph.segments:
            if not hasattr(seg, "citations"):
                continue
            if len(seg.citations) > MAX_CITATION_RUN:
                out.append(
                    Diagnostic(
                        Severity.WARNING,
                        "CITE_RUN_TOO_LONG",
                        f"{len(seg.citations)} citations in a row "
                        f"(limit {MAX_CITATION_RUN})",
                        (0, 0),
                    )
                )
            for ref in seg.citations:
                if ref.index is not None and ref.index > candidate_count:
                    out.append(
                        Diagnostic(
                            Severity.ERROR,
                            "CITE_OUT_OF_RANGE",
                            f"citation [{ref.index}] exceeds candidate set "
                            f"of size {candidate_count}",
                            (0, 0),
                        )
                    )

    for span in report.intent_spans():
        if span.intent_type.is_other:
            out.append(
                Diagnostic(
                    Severity.WARNING,
                    "UNKNOWN_INTENT_TYPE",
                    f"label {span.raw_label!r} is outside the "
                    f"{span.category.value} intent schema",
                    span.source_range,
                )
            )
    return out
