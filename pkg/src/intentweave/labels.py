"""Intent type schema: kind names, label normalization, display labels.

Two categories of intent exist: citation intents (six kinds, from the
citation-function literature) and paragraph intents (eight kinds, from
discourse-mode research). Labels outside the schema normalize to Other
and later aggregate into the analytics error bucket.
"""

from __future__ import annotations

import re

OTHER_KIND = "Other"

CITATION_KINDS = (
    "Background",
    "Motivation",
    "Uses",
    "Extension",
    "ComparisonOrContrast",
    "Future",
)

PARAGRAPH_KINDS = (
    "Exposition",
    "Definition",
    "Argumentation",
    "CompareContrast",
    "CauseEffect",
    "ProblemSolution",
    "Evaluation",
    "Narration",
)

# Canonical surface labels used when serializing constructed spans and in
# prompt type lists.
CANONICAL_CITATION_LABELS = {
    "Background": "CIT-BACKGROUND",
    "Motivation": "CIT-MOTIVATION",
    "Uses": "CIT-USES",
    "Extension": "CIT-EXTENSION",
    "ComparisonOrContrast": "CIT-COMPARISON OR CONTRAST",
    "Future": "CIT-FUTURE",
}

CANONICAL_PARAGRAPH_LABELS = {
    "Exposition": "PIT-Exposition",
    "Definition": "PIT-Definition",
    "Argumentation": "PIT-Argumentation",
    "CompareContrast": "PIT-Compare-Contrast",
    "CauseEffect": "PIT-Cause-Effect",
    "ProblemSolution": "PIT-Problem-Solution",
    "Evaluation": "PIT-Evaluation",
    "Narration": "PIT-Narration",
}

# One-line descriptions per kind, used to render prompt type lists.
CITATION_KIND_DESCRIPTIONS = {
    "Background": "the citation provides relevant information for this domain",
    "Motivation": "the citation illustrates need for data, goals, methods, etc.",
    "Uses": "the sentence uses data, methods, etc. from the citation",
    "Extension": "the sentence extends the referenced work's data, methods, etc. of the citation",
    "ComparisonOrContrast": "the sentence expresses similarity/differences to the referenced work of the citation",
    "Future": "the citation identifies the referenced work as a potential avenue for future work",
}

PARAGRAPH_KIND_DESCRIPTIONS = {
    "Exposition": "This paragraph's main function is to explain, clarify, or provide background information on a topic (e.g., introducing a concept, summarizing prior work).",
    "Definition": "This paragraph's primary purpose is to define a key term, concept, or theory, often providing necessary boundaries for its use in the report.",
    "Argumentation": "This paragraph presents a specific claim or thesis and supports it with evidence, logic, or reasoning to persuade the reader.",
    "CompareContrast": "This paragraph's structure is organized around highlighting the similarities and/or differences between two or more subjects, theories, or findings.",
    "CauseEffect": "This paragraph focuses on explaining the causal relationship between events or phenomena, detailing why something happened or what its results were.",
    "ProblemSolution": "This paragraph identifies a specific problem, gap, or challenge and then proposes or describes a potential solution or response.",
    "Evaluation": "This paragraph assesses the strengths, weaknesses, validity, or significance of a study, theory, or piece of evidence according to a set of criteria.",
    "Narration": "This paragraph recounts a sequence of events, such as the historical development of a field, the chronology of a case study, or the steps in a process.",
}

_SEPARATORS = re.compile(r"[\s_\-]+")


def _fold(label: str) -> str:
    """Case- and separator-insensitive key for matching a label to a kind."""
    return _SEPARATORS.sub("", label).casefold()


def _match_keys(kinds) -> dict[str, str]:
    return {_fold(kind): kind for kind in kinds}


_CITATION_MATCH = _match_keys(CITATION_KINDS)
# "Comparison or Contrast" folds differently from the kind name; add the
# spelled-out form plus the hyphenated paragraph names.
_CITATION_MATCH[_fold("Comparison or Contrast")] = "ComparisonOrContrast"

_PARAGRAPH_MATCH = _match_keys(PARAGRAPH_KINDS)
_PARAGRAPH_MATCH[_fold("Compare-Contrast")] = "CompareContrast"
_PARAGRAPH_MATCH[_fold("Cause-Effect")] = "CauseEffect"
_PARAGRAPH_MATCH[_fold("Problem-Solution")] = "ProblemSolution"


def normalize_intent_label(raw_label: str, category) -> "IntentType":
    """Normalize a bracketed label (brackets removed) to an IntentType.

    Matching is case-insensitive, tolerates the category prefix ("CIT-" or
    "PIT-") and a trailing colon, and ignores space/hyphen/underscore
    differences. Anything short of the full kind name (e.g. just
    "comparison") normalizes to Other with the label preserved verbatim.
    Pure: never fails, equal inputs give equal outputs.
    """
    from .model import IntentCategory, IntentType

    category = IntentCategory(category) if not isinstance(category, IntentCategory) else category
    candidate = raw_label.strip()
    if candidate.endswith(":"):
        candidate = candidate[:-1].rstrip()
    prefix = "CIT-" if category is IntentCategory.CITATION else "PIT-"
    if candidate[: len(prefix)].upper() == prefix:
        candidate = candidate[len(prefix):]
    table = (
        _CITATION_MATCH if category is IntentCategory.CITATION else _PARAGRAPH_MATCH
    )
    kind = table.get(_fold(candidate))
    if kind is None:
        return IntentType(category=category, kind=OTHER_KIND, other_label=raw_label)
    return IntentType(category=category, kind=kind)


def canonical_label(category_value: str, kind: str) -> str:
    """Canonical surface label for a schema kind ("" for Other)."""
    if kind == OTHER_KIND:
        return ""
    if category_value == "citation":
        return CANONICAL_CITATION_LABELS[kind]
    return CANONICAL_PARAGRAPH_LABELS[kind]
