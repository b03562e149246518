"""Prompt construction for report generation and auxiliary calls.

Five generation variants select which intent instruction blocks appear:
both categories, one category, none, or a mixed schema listing only the
most frequent types per category with an improvisation clause. Templates
are versioned text assets under ``templates/``; rendering is pure, so
identical inputs give byte-identical prompts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from typing import TYPE_CHECKING, Optional, Sequence

from .labels import (
    CANONICAL_CITATION_LABELS,
    CANONICAL_PARAGRAPH_LABELS,
    CITATION_KIND_DESCRIPTIONS,
    CITATION_KINDS,
    PARAGRAPH_KIND_DESCRIPTIONS,
    PARAGRAPH_KINDS,
)
from .model import Diagnostic, Severity

if TYPE_CHECKING:
    from .retrieval import SnippetCandidate

TEMPLATE_VERSION = "v1"

# Defaults for the mixed schema: the three most used types per category.
MIXED_CITATION_KINDS = ("Background", "Motivation", "Uses")
MIXED_PARAGRAPH_KINDS = ("Exposition", "Argumentation", "ProblemSolution")

_IMPROVISE_CLAUSE = (
    "    If none of these types fit, add your own type: "
    "a single, capitalized word of your choosing."
)

_REF_HEADER = "Here are the relevant reference quotes to cite:\nsection_references\n"


class PromptVariant(Enum):
    BOTH_INTENTS = "both"
    CITATION_ONLY = "citation_only"
    PARAGRAPH_ONLY = "paragraph_only"
    NO_INTENT = "no_intent"
    MIXED_SCHEMA = "mixed"


_VARIANT_TEMPLATES = {
    PromptVariant.BOTH_INTENTS: "generation_both.txt",
    PromptVariant.CITATION_ONLY: "generation_citation_only.txt",
    PromptVariant.PARAGRAPH_ONLY: "generation_paragraph_only.txt",
    PromptVariant.NO_INTENT: "generation_no_intent.txt",
    PromptVariant.MIXED_SCHEMA: "generation_both.txt",
}


class EmptyQueryError(ValueError):
    pass


class EmptyCandidatesError(ValueError):
    pass


@dataclass(frozen=True)
class PromptBundle:
    """A rendered prompt plus the candidate numbering it was built with."""

    user_text: str
    system_text: Optional[str] = None
    candidate_numbering: dict = None  # index -> paper_id

    def __post_init__(self):
        if self.candidate_numbering is None:
            object.__setattr__(self, "candidate_numbering", {})


def _load_template(name: str) -> str:
    path = resources.files("intentweave").joinpath(
        "templates", TEMPLATE_VERSION, name
    )
    return path.read_text(encoding="utf-8")


def render_citation_type_list(kinds: Sequence[str] = CITATION_KINDS) -> str:
    entries = []
    for i, kind in enumerate(kinds, 1):
        mark = ";" if i < len(kinds) else "."
        entries.append(
            f"    ({i}) {CANONICAL_CITATION_LABELS[kind]}: "
            f"{CITATION_KIND_DESCRIPTIONS[kind]}{mark}"
        )
    return "\n\n".join(entries)


def render_paragraph_type_list(kinds: Sequence[str] = PARAGRAPH_KINDS) -> str:
    entries = [
        f"    ({i}) {CANONICAL_PARAGRAPH_LABELS[kind]}: "
        f"{PARAGRAPH_KIND_DESCRIPTIONS[kind]}"
        for i, kind in enumerate(kinds, 1)
    ]
    return "\n\n".join(entries)


def render_candidates(candidates: Sequence["SnippetCandidate"]) -> str:
    """Quotes keyed "[Citation n]", numbered 1..N in list order."""
    lines = []
    for position, candidate in enumerate(candidates, 1):
        text = candidate.salient or candidate.snippet
        lines.append(f"[Citation {position}] {text}")
    return "\n".join(lines)


def _type_lists(variant, top_k, citation_kinds, paragraph_kinds):
    if variant is PromptVariant.MIXED_SCHEMA:
        ckinds = tuple(citation_kinds or MIXED_CITATION_KINDS)[:top_k]
        pkinds = tuple(paragraph_kinds or MIXED_PARAGRAPH_KINDS)[:top_k]
        clist = render_citation_type_list(ckinds) + "\n\n" + _IMPROVISE_CLAUSE
        plist = render_paragraph_type_list(pkinds) + "\n\n" + _IMPROVISE_CLAUSE
        return clist, plist
    return render_citation_type_list(), render_paragraph_type_list()


def _render_generation(query, candidates, variant, top_k, citation_kinds,
                       paragraph_kinds) -> tuple[str, dict]:
    if not query or not query.strip():
        raise EmptyQueryError("query must be non-empty")
    variant = PromptVariant(variant)
    template = _load_template(_VARIANT_TEMPLATES[variant])
    clist, plist = _type_lists(variant, top_k, citation_kinds, paragraph_kinds)
    user_text = template.format(
        query=query,
        section_references=render_candidates(candidates),
        citation_type_list=clist,
        paragraph_type_list=plist,
    )
    numbering = {pos: c.paper_id for pos, c in enumerate(candidates, 1)}
    return user_text, numbering


def build_generation_prompt(
    query: str,
    candidates: Sequence["SnippetCandidate"],
    variant: PromptVariant = PromptVariant.BOTH_INTENTS,
    *,
    top_k: int = 3,
    citation_kinds: Optional[Sequence[str]] = None,
    paragraph_kinds: Optional[Sequence[str]] = None,
) -> PromptBundle:
    """Render the full generation prompt for one variant.

    ``top_k`` and the kind overrides only apply to the mixed schema.
    """
    user_text, numbering = _render_generation(
        query, candidates, variant, top_k, citation_kinds, paragraph_kinds
    )
    return PromptBundle(user_text=user_text, candidate_numbering=numbering)


def build_training_parts(
    query: str,
    candidates: Sequence["SnippetCandidate"],
    variant: PromptVariant,
    *,
    top_k: int = 3,
) -> tuple[str, str]:
    """(instruction, context) split for training examples.

    The instruction carries all guidance and ends with the reference
    header; the context is the rendered quotes, so concatenating the two
    yields a complete prompt with the quotes last.
    """
    user_text, _ = _render_generation(query, candidates, variant, top_k, None, None)
    quotes = render_candidates(candidates)
    block = _REF_HEADER + quotes + "\n"
    idx = user_text.find(block)
    if idx < 0:  # no candidates: the header is followed by a blank slot
        block = _REF_HEADER + "\n"
        idx = user_text.find(block)
    head = user_text[:idx].rstrip("\n")
    tail = user_text[idx + len(block):].lstrip("\n")
    instruction = head + "\n\n" + tail.rstrip("\n") + "\n\n" + _REF_HEADER
    return instruction, quotes + "\n"


def build_preplan_prompt(
    query: str, candidates: Sequence["SnippetCandidate"]
) -> PromptBundle:
    """Prompt for per-candidate intent guesses and relevance scores.

    The reply format is the line protocol ``n | TYPE | score``, one line
    per candidate, score in [0, 1].
    """
    if not candidates:
        raise EmptyCandidatesError("pre-planning requires at least one candidate")
    if not query or not query.strip():
        raise EmptyQueryError("query must be non-empty")
    template = _load_template("preplan.txt")
    user_text = template.format(
        query=query,
        candidate_count=len(candidates),
        section_references=render_candidates(candidates),
        citation_type_list=render_citation_type_list(),
    )
    numbering = {pos: c.paper_id for pos, c in enumerate(candidates, 1)}
    return PromptBundle(user_text=user_text, candidate_numbering=numbering)


def build_salience_prompt(query: str, snippet: str, *, max_chars: int = 1200) -> PromptBundle:
    """Prompt to extract the query-relevant parts of a snippet verbatim."""
    if not snippet:
        raise ValueError("snippet must be non-empty")
    if not query or not query.strip():
        raise EmptyQueryError("query must be non-empty")
    template = _load_template("salience.txt")
    return PromptBundle(
        user_text=template.format(query=query, snippet=snippet, max_chars=max_chars)
    )


@dataclass(frozen=True)
class PreplanScore:
    index: int
    intent_label: str
    score: float


def parse_preplan_response(text: str) -> tuple[list[PreplanScore], list[Diagnostic]]:
    """Parse "n | TYPE | score" lines; malformed lines become diagnostics."""
    scores: list[PreplanScore] = []
    diagnostics: list[Diagnostic] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("|")]
        try:
            if len(parts) != 3:
                raise ValueError("expected three | separated fields")
            scores.append(
                PreplanScore(index=int(parts[0]), intent_label=parts[1],
                             score=float(parts[2]))
            )
        except ValueError as exc:
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    "MALFORMED_PREPLAN",
                    f"unparseable pre-plan line {line!r}: {exc}",
                    (0, 0),
                )
            )
    if not scores and text.strip() and not diagnostics:
        diagnostics.append(
            Diagnostic(
                Severity.WARNING, "MALFORMED_PREPLAN",
                "pre-plan payload contained no score lines", (0, 0),
            )
        )
    return scores, diagnostics


def apply_preplan_ranking(
    candidates: Sequence["SnippetCandidate"],
    scores: Sequence[PreplanScore],
) -> tuple[list["SnippetCandidate"], list[Diagnostic]]:
    """Reorder candidates by descending score; stable on ties.

    Unscored candidates are appended in their original order with a
    warning; scores for unknown indices are dropped with a warning. The
    result is renumbered 1..N.
    """
    diagnostics: list[Diagnostic] = []
    by_index: dict[int, float] = {}
    for score in scores:
        if not 1 <= score.index <= len(candidates):
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    "MALFORMED_PREPLAN",
                    f"pre-plan score for unknown candidate {score.index}",
                    (0, 0),
                )
            )
            continue
        by_index[score.index] = score.score

    scored = [
        (pos, c) for pos, c in enumerate(candidates, 1) if pos in by_index
    ]
    unscored = [
        (pos, c) for pos, c in enumerate(candidates, 1) if pos not in by_index
    ]
    scored.sort(key=lambda item: (-by_index[item[0]], item[0]))
    if unscored:
        diagnostics.append(
            Diagnostic(
                Severity.WARNING,
                "UNSCORED_CANDIDATE",
                "candidates without pre-plan scores kept in original order: "
                + ", ".join(str(pos) for pos, _ in unscored),
                (0, 0),
            )
        )
    reordered = [c for _, c in scored] + [c for _, c in unscored]
    return (
        [replace(c, index=pos) for pos, c in enumerate(reordered, 1)],
        diagnostics,
    )
