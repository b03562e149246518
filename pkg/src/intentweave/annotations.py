"""Reader-study annotation records and their append-only store.

An annotation is one Likert judgment on a paragraph or on a citation
inside a stored report, addressed by a stable item path like ``s0.p2``
(section 0, paragraph 2) or ``s0.p2.c1`` (its second citation). Storage
is an append-only JSON-lines file with a single serialized writer;
reads compact duplicates so the latest rating per
(report_id, item_id, annotator) wins.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .model import CitedClaim, Report

ITEM_CLASSES = ("paragraph", "citation")
CONDITIONS = ("baseline", "intent")

_ITEM_ID = re.compile(r"^s(\d+)\.p(\d+)(?:\.c(\d+))?$")


class AnnotationError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotationRecord:
    report_id: str
    item_class: str
    item_id: str
    rating: int
    condition: str = "intent"
    comment: Optional[str] = None
    annotator: str = "anonymous"
    annotation_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    created_at: str = field(
        default_factory=lambda: time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    )

    def __post_init__(self):
        if self.item_class not in ITEM_CLASSES:
            raise AnnotationError(f"item_class must be one of {ITEM_CLASSES}")
        if not isinstance(self.rating, int) or not 1 <= self.rating <= 5:
            raise AnnotationError("rating must be an integer in 1..5")
        if self.condition not in CONDITIONS:
            raise AnnotationError(f"condition must be one of {CONDITIONS}")
        if _ITEM_ID.match(self.item_id) is None:
            raise AnnotationError(f"malformed item_id {self.item_id!r}")
        if self.item_class == "citation" and ".c" not in self.item_id:
            raise AnnotationError("citation annotations need a citation ordinal")
        if self.item_class == "paragraph" and ".c" in self.item_id:
            raise AnnotationError("paragraph annotations take no citation ordinal")

    def key(self) -> tuple:
        return (self.report_id, self.item_id, self.annotator)

    def to_dict(self) -> dict:
        return {
            "annotation_id": self.annotation_id,
            "report_id": self.report_id,
            "item_class": self.item_class,
            "item_id": self.item_id,
            "rating": self.rating,
            "comment": self.comment,
            "condition": self.condition,
            "annotator": self.annotator,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnnotationRecord":
        return cls(
            report_id=d["report_id"],
            item_class=d["item_class"],
            item_id=d["item_id"],
            rating=d["rating"],
            condition=d.get("condition", "intent"),
            comment=d.get("comment"),
            annotator=d.get("annotator", "anonymous"),
            annotation_id=d.get("annotation_id") or uuid.uuid4().hex,
            created_at=d.get("created_at")
            or time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        )


def resolve_item(report: Report, item_id: str) -> bool:
    """True iff the item path points at a real paragraph or citation."""
    match = _ITEM_ID.match(item_id)
    if match is None:
        return False
    s_idx, p_idx = int(match.group(1)), int(match.group(2))
    if s_idx >= len(report.sections):
        return False
    section = report.sections[s_idx]
    if p_idx >= len(section.paragraphs):
        return False
    if match.group(3) is None:
        return True
    c_idx = int(match.group(3))
    citations = [
        ref
        for seg in section.paragraphs[p_idx].segments
        if isinstance(seg, CitedClaim)
        for ref in seg.citations
    ]
    return c_idx < len(citations)


class AnnotationStore:
    """Append-only JSONL store; appends are atomic and durable."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, record: AnnotationRecord) -> str:
        line = json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        return record.annotation_id

    def load(self, dedup: bool = True) -> list[AnnotationRecord]:
        """Stored records; with ``dedup`` the latest record per
        (report_id, item_id, annotator) wins, in first-seen key order."""
        if not self.path.exists():
            return []
        records: list[AnnotationRecord] = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(AnnotationRecord.from_dict(json.loads(line)))
        if not dedup:
            return records
        latest: dict[tuple, AnnotationRecord] = {}
        for record in records:
            latest[record.key()] = record
        return list(latest.values())

    def export_jsonl(self) -> str:
        """Compacted (latest-wins) JSONL view of the store."""
        return "".join(
            json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True) + "\n"
            for r in self.load(dedup=True)
        )
