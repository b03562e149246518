"""SFT corpus construction from teacher generation records.

Each record decomposes into four training views: the full tagged report,
a paragraph-intents-only view, a citation-intents-only view, and a
tag-free view, each paired with the instruction variant that asks for
exactly that markup. Emission modes select which views land in the JSONL
file; multiview emits all four (4x the source records).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .pipeline import GenerationRecord
from .prompts import PromptVariant, build_training_parts
from .serializer import SerializeMode, serialize_report


class ViewKind(Enum):
    EXPLICIT = "explicit"
    PARAGRAPH_ONLY = "paragraph_only"
    CITATION_ONLY = "citation_only"
    NO_INTENT = "no_intent"


class EmitMode(Enum):
    BASELINE = "baseline"
    IMPLICIT = "implicit"
    EXPLICIT = "explicit"
    MULTIVIEW = "multiview"


VIEW_SPECS = {
    ViewKind.EXPLICIT: (PromptVariant.BOTH_INTENTS, SerializeMode.FULL),
    ViewKind.PARAGRAPH_ONLY: (
        PromptVariant.PARAGRAPH_ONLY,
        SerializeMode.PARAGRAPH_ONLY,
    ),
    ViewKind.CITATION_ONLY: (
        PromptVariant.CITATION_ONLY,
        SerializeMode.CITATION_ONLY,
    ),
    ViewKind.NO_INTENT: (PromptVariant.NO_INTENT, SerializeMode.STRIPPED),
}

_MODE_VIEWS = {
    EmitMode.BASELINE: (ViewKind.NO_INTENT,),
    EmitMode.IMPLICIT: (ViewKind.NO_INTENT,),
    EmitMode.EXPLICIT: (ViewKind.EXPLICIT,),
    EmitMode.MULTIVIEW: tuple(ViewKind),
}


class DegenerateSourceError(ValueError):
    """The source record parsed to zero sections; no views can be built."""


@dataclass(frozen=True)
class TrainingExample:
    example_id: str
    query_id: str
    view: ViewKind
    instruction: str
    context: str
    target: str

    def to_jsonl_obj(self) -> dict:
        return {
            "example_id": self.example_id,
            "view": self.view.value,
            "messages": [
                {"role": "user", "content": self.instruction + self.context},
                {"role": "assistant", "content": self.target},
            ],
        }


def make_views(record: GenerationRecord) -> list[TrainingExample]:
    """Exactly four training examples, one per view kind."""
    if not record.parsed.sections:
        raise DegenerateSourceError(
            f"record {record.query_id} has zero sections"
        )
    examples = []
    for view in ViewKind:
        variant, mode = VIEW_SPECS[view]
        instruction, context = build_training_parts(
            record.query, record.candidates, variant
        )
        examples.append(
            TrainingExample(
                example_id=f"{record.query_id}:{view.value}",
                query_id=record.query_id,
                view=view,
                instruction=instruction,
                context=context,
                target=serialize_report(record.parsed, mode),
            )
        )
    return examples


def emit_jsonl(
    examples: Iterable[TrainingExample],
    mode: EmitMode,
    path: Path,
) -> int:
    """Write the selected views as JSONL; returns the line count."""
    mode = EmitMode(mode)
    wanted = set(_MODE_VIEWS[mode])
    path = Path(path)
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for example in examples:
            if example.view not in wanted:
                continue
            fh.write(json.dumps(example.to_jsonl_obj(), ensure_ascii=False))
            fh.write("\n")
            count += 1
    return count


def load_jsonl(path: Path) -> list[dict]:
    """Objects as written by emit_jsonl, one per line."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def corpus_to_jsonl(
    records: Sequence[GenerationRecord],
    mode: EmitMode,
    path: Path,
    skip_degenerate: bool = True,
) -> int:
    """make_views over a whole corpus, then emit. Degenerate records are
    skipped (or raise, when ``skip_degenerate`` is false)."""

    def all_views():
        for record in records:
            try:
                yield from make_views(record)
            except DegenerateSourceError:
                if not skip_degenerate:
                    raise

    return emit_jsonl(all_views(), mode, path)
