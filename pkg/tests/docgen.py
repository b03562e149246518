"""Seeded generator of grammar-conforming report documents for tests.

Documents exercise the full surface: section/TLDR markers, paragraph
intents, citation intents in grouped and interleaved positions, bare and
named citation markers, memory citations, and label spelling variants
(canonical, bare kind, lowercase, trailing colon, off-schema).
"""

from __future__ import annotations

import random

WORDS = (
    "retrieval models evidence synthesis corpus neural language benchmark "
    "analysis method training data report citation snippet query answer "
    "structure attention transformer scaling embedding ranking precision "
    "recall pipeline graph entity domain knowledge context generation"
).split()

CITATION_LABELS = [
    "CIT-BACKGROUND",
    "CIT-MOTIVATION",
    "CIT-USES",
    "CIT-EXTENSION",
    "CIT-COMPARISON OR CONTRAST",
    "CIT-FUTURE",
    "Background",
    "uses",
    "Motivation:",
    "comparison",  # off-schema: normalizes to Other
]

PARAGRAPH_LABELS = [
    "PIT-Exposition",
    "PIT-Definition",
    "PIT-Argumentation",
    "PIT-Compare-Contrast",
    "PIT-Cause-Effect",
    "PIT-Problem-Solution",
    "PIT-Evaluation",
    "PIT-Narration",
    "Exposition",
    "narration",
    "Summary",  # off-schema: normalizes to Other
]


def _words(rng: random.Random, lo: int, hi: int) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def _sentence(rng: random.Random) -> str:
    return _words(rng, 4, 12).capitalize() + "."


def _citation_marker(rng: random.Random, max_index: int) -> str:
    n = rng.randint(1, max_index)
    form = rng.random()
    if form < 0.7:
        return f"[{n}]"
    if form < 0.9:
        return f"[Citation {n}]"
    return "[LLM MEMORY | 2025]"


def _citation_intent(rng: random.Random) -> str:
    label = rng.choice(CITATION_LABELS)
    return f"<bcit>[{label}]: {_words(rng, 4, 10)} <ecit>"


def _claim(rng: random.Random, max_index: int) -> str:
    parts = [_words(rng, 5, 12).capitalize()]
    n_intents = rng.randint(1, 3)
    n_cites = rng.randint(n_intents, 5)
    if rng.random() < 0.3 and n_intents > 1:
        # interleaved: intent, citation, intent, citation...
        for k in range(n_intents):
            parts.append(_citation_intent(rng))
            parts.append(_citation_marker(rng, max_index))
        for _ in range(n_cites - n_intents):
            parts.append(_citation_marker(rng, max_index))
    else:
        for _ in range(n_intents):
            parts.append(_citation_intent(rng))
        for _ in range(n_cites):
            parts.append(_citation_marker(rng, max_index))
    parts.append(_words(rng, 0, 4) + ".")
    return " ".join(p for p in parts if p.strip())


def gen_paragraph(rng: random.Random, max_index: int) -> str:
    parts = []
    if rng.random() < 0.8:
        label = rng.choice(PARAGRAPH_LABELS)
        parts.append(f"<bpit>[{label}]: {_words(rng, 5, 14)} <epit>")
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.6:
            parts.append(_claim(rng, max_index))
        else:
            parts.append(_sentence(rng))
    return " ".join(parts)


def gen_document(rng: random.Random, max_index: int = 10) -> str:
    blocks = []
    for _ in range(rng.randint(1, 4)):
        title = _words(rng, 2, 5).title()
        tldr = f"{_sentence(rng)} {_sentence(rng)}"
        blocks.append(f"SECTION; {title}\nTLDR; {tldr}")
        for _ in range(rng.randint(1, 4)):
            blocks.append(gen_paragraph(rng, max_index))
    return "\n\n".join(blocks) + "\n"


def gen_corpus(seed: int, count: int, max_index: int = 10) -> list[str]:
    rng = random.Random(seed)
    return [gen_document(rng, max_index) for _ in range(count)]
