"""Behavioral statistics over parsed reports and reader annotations.

Covers four statistics: intent-type distributions with an error bucket
for off-schema labels, candidate usage (fraction of the retrieved set a
report actually cites), citation coverage against a reference model's
report, and Likert rating summaries from the reader study. All
aggregates are means of per-query values.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .annotations import AnnotationRecord
from .model import IntentCategory, Report
from .retrieval import CandidateSet

logger = logging.getLogger(__name__)

ERROR_BUCKET = "(error)"

# Display rows, in report order; the error bucket collects Other labels.
CITATION_ROWS = (
    "Background",
    "Motivation",
    "Uses",
    "Extension",
    "Comparison",
    "Future",
    ERROR_BUCKET,
)

PARAGRAPH_ROWS = (
    "Exposition",
    "Definition",
    "Argumentation",
    "Compare-Contrast",
    "Cause-Effect",
    "Problem-Solution",
    "Narration",
    "Evaluation",
    ERROR_BUCKET,
)

_CITATION_ROW_BY_KIND = {
    "Background": "Background",
    "Motivation": "Motivation",
    "Uses": "Uses",
    "Extension": "Extension",
    "ComparisonOrContrast": "Comparison",
    "Future": "Future",
}

_PARAGRAPH_ROW_BY_KIND = {
    "Exposition": "Exposition",
    "Definition": "Definition",
    "Argumentation": "Argumentation",
    "CompareContrast": "Compare-Contrast",
    "CauseEffect": "Cause-Effect",
    "ProblemSolution": "Problem-Solution",
    "Narration": "Narration",
    "Evaluation": "Evaluation",
}


class EmptyCandidateSetError(ValueError):
    pass


class EmptySetError(ValueError):
    pass


@dataclass(frozen=True)
class IntentDistribution:
    category: IntentCategory
    counts: dict  # row label -> count, every row present
    percentages: dict  # row label -> percent; empty when total is zero
    total: int

    def rows(self) -> tuple:
        return (
            CITATION_ROWS
            if self.category is IntentCategory.CITATION
            else PARAGRAPH_ROWS
        )


@dataclass(frozen=True)
class UsageStats:
    per_query: dict  # query_id -> fraction in [0, 1]
    mean: float


@dataclass(frozen=True)
class CoverageStats:
    per_query: dict
    mean: float


@dataclass(frozen=True)
class LikertSummary:
    item_class: str  # "paragraph" | "citation"
    n: int
    mean: float
    std: float

    def render(self) -> str:
        return f"{self.mean:.2f} ± {self.std:.2f}"


def intent_distribution(
    reports: Iterable[Report], category: IntentCategory
) -> IntentDistribution:
    """Count spans of one category across reports; Other kinds land in
    the error bucket. Percentages are over all spans of the category."""
    category = IntentCategory(category)
    rows = CITATION_ROWS if category is IntentCategory.CITATION else PARAGRAPH_ROWS
    row_by_kind = (
        _CITATION_ROW_BY_KIND
        if category is IntentCategory.CITATION
        else _PARAGRAPH_ROW_BY_KIND
    )
    counts = {row: 0 for row in rows}
    total = 0
    for report in reports:
        for span in report.intent_spans(category):
            row = row_by_kind.get(span.intent_type.kind, ERROR_BUCKET)
            counts[row] += 1
            total += 1
    percentages = (
        {row: 100.0 * count / total for row, count in counts.items()}
        if total
        else {}
    )
    return IntentDistribution(
        category=category, counts=counts, percentages=percentages, total=total
    )


def candidate_usage(report: Report, candidate_set: CandidateSet) -> float:
    """Fraction of the candidate set cited at least once.

    Distinct-set semantics: repeat citations do not count twice; memory
    citations and out-of-range indices are excluded from the numerator.
    """
    n = len(candidate_set)
    if n == 0:
        raise EmptyCandidateSetError("candidate set is empty")
    cited = {i for i in report.candidate_indices() if 1 <= i <= n}
    return len(cited) / n


def citation_coverage(candidate_report: Report, reference_report: Report) -> float:
    """Overlap of the candidate's cited set with the reference's cited
    set, relative to the reference. A reference citing nothing gives 0."""
    reference = reference_report.candidate_indices()
    if not reference:
        logger.warning("citation_coverage: reference report cites no candidates")
        return 0.0
    candidate = candidate_report.candidate_indices()
    return len(candidate & reference) / len(reference)


def usage_stats(items: Mapping[str, tuple[Report, CandidateSet]]) -> UsageStats:
    """Per-query candidate usage plus the query-level mean."""
    per_query = {
        query_id: candidate_usage(report, candidate_set)
        for query_id, (report, candidate_set) in items.items()
    }
    mean = sum(per_query.values()) / len(per_query) if per_query else 0.0
    return UsageStats(per_query=per_query, mean=mean)


def coverage_stats(items: Mapping[str, tuple[Report, Report]]) -> CoverageStats:
    """Per-query citation coverage plus the query-level mean."""
    per_query = {
        query_id: citation_coverage(candidate, reference)
        for query_id, (candidate, reference) in items.items()
    }
    mean = sum(per_query.values()) / len(per_query) if per_query else 0.0
    return CoverageStats(per_query=per_query, mean=mean)


def likert_summary(
    annotations: Iterable[AnnotationRecord], item_class: str
) -> LikertSummary:
    """Mean and population standard deviation of ratings for one class."""
    ratings = [a.rating for a in annotations if a.item_class == item_class]
    n = len(ratings)
    if n == 0:
        raise EmptySetError(f"no annotations with item_class {item_class!r}")
    mean = sum(ratings) / n
    variance = sum((r - mean) ** 2 for r in ratings) / n
    return LikertSummary(item_class=item_class, n=n, mean=mean, std=math.sqrt(variance))


# -- emitters -----------------------------------------------------------


def distribution_to_json(dist: IntentDistribution) -> str:
    return json.dumps(
        {
            "category": dist.category.value,
            "total": dist.total,
            "counts": dist.counts,
            "percentages": {k: round(v, 2) for k, v in dist.percentages.items()},
        },
        ensure_ascii=False,
        sort_keys=True,
    )


def distribution_to_csv(dist: IntentDistribution) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["type", "count", "percent"])
    for row in dist.rows():
        percent = dist.percentages.get(row, 0.0)
        writer.writerow([row, dist.counts[row], f"{percent:.2f}"])
    return buf.getvalue()


def _per_query_json(stats, value_name: str) -> str:
    return json.dumps(
        {
            "mean": stats.mean,
            value_name: {k: stats.per_query[k] for k in sorted(stats.per_query)},
        },
        ensure_ascii=False,
        sort_keys=True,
    )


def usage_to_json(stats: UsageStats) -> str:
    return _per_query_json(stats, "per_query")


def coverage_to_json(stats: CoverageStats) -> str:
    return _per_query_json(stats, "per_query")


def _per_query_csv(stats) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["query_id", "fraction"])
    for query_id in sorted(stats.per_query):
        writer.writerow([query_id, f"{stats.per_query[query_id]:.6f}"])
    writer.writerow(["mean", f"{stats.mean:.6f}"])
    return buf.getvalue()


usage_to_csv = _per_query_csv
coverage_to_csv = _per_query_csv


def likert_to_json(summary: LikertSummary) -> str:
    return json.dumps(
        {
            "item_class": summary.item_class,
            "n": summary.n,
            "mean": round(summary.mean, 4),
            "std": round(summary.std, 4),
            "rendered": summary.render(),
        },
        ensure_ascii=False,
        sort_keys=True,
    )


def likert_to_csv(summary: LikertSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["item_class", "n", "mean", "std"])
    writer.writerow([summary.item_class, summary.n,
                     f"{summary.mean:.2f}", f"{summary.std:.2f}"])
    return buf.getvalue()
