"""intentweave: tooling for intent-annotated long-form scientific reports.

Parse, validate, serialize, and analyze reports that carry inline
paragraph-intent and citation-intent tags; build the prompts that elicit
them; drive retrieval + generation pipelines; and derive SFT corpora and
behavioral statistics from the results.
"""

from .labels import (
    CITATION_KINDS,
    OTHER_KIND,
    PARAGRAPH_KINDS,
    normalize_intent_label,
)
from .model import (
    CitationRef,
    CitedClaim,
    Diagnostic,
    IntentCategory,
    IntentSpan,
    IntentType,
    Paragraph,
    PlainText,
    Report,
    Section,
    Severity,
    report_from_dict,
    report_to_dict,
)
from .parser import parse_report, strip_intents
from .serializer import SerializeMode, serialize_report
from .validate import DIAGNOSTIC_CODES, validate_report

__version__ = "0.1.0"

__all__ = [
    "CITATION_KINDS",
    "OTHER_KIND",
    "PARAGRAPH_KINDS",
    "CitationRef",
    "CitedClaim",
    "Diagnostic",
    "DIAGNOSTIC_CODES",
    "IntentCategory",
    "IntentSpan",
    "IntentType",
    "Paragraph",
    "PlainText",
    "Report",
    "Section",
    "SerializeMode",
    "Severity",
    "normalize_intent_label",
    "parse_report",
    "report_from_dict",
    "report_to_dict",
    "serialize_report",
    "strip_intents",
    "validate_report",
    "__version__",
]
