"""Scoring pipelines against hand-annotated ground truth.

Ground truth is a TSV of annotated evidence spans per metric. A retrieved
answer counts as correct when its tokens intersect the tokens of any
annotated span for that metric — deliberately lenient, matching how the
underlying retrieval quality measure is defined. A stricter token-level
F1 is computed alongside as a supplementary diagnostic column; it plays
no part in the headline score.

The error report aggregates reviewer-assigned categories over reviewed
evidence records and derives the filtered accuracy: records judged "not
in document" are excluded, partial matches count as wrong.
"""

from __future__ import annotations

import csv
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .answerers import Answer
from .documents import PolicyDocument
from .errors import MalformedInput, SpanTextMismatch
from .textprep import tokenize

__all__ = [
    "ANNOTATION_COLUMNS",
    "ERROR_CATEGORIES",
    "AnnotatedSpan",
    "AnnotationSet",
    "QualityReport",
    "ErrorReport",
    "UnknownMetricWarning",
    "load_annotations",
    "save_annotations",
    "is_correct",
    "strict_token_f1",
    "quality_score",
    "quality_by_pipeline",
    "error_report",
]

ANNOTATION_COLUMNS = ("metric_name", "start_offset", "end_offset", "text")

ERROR_CATEGORIES = ("NoError", "PartialMatching", "FalseOrOtherError", "NotInDocument")


class UnknownMetricWarning(UserWarning):
    """An annotation names a metric absent from the catalog."""


@dataclass(frozen=True)
class AnnotatedSpan:
    start_offset: int
    end_offset: int
    text: str


@dataclass(frozen=True)
class AnnotationSet:
    """All annotated evidence spans for one document."""

    doc_id: str
    entries: dict[str, tuple[AnnotatedSpan, ...]]
    unknown_metrics: frozenset[str] = frozenset()

    def metrics(self) -> list[str]:
        return sorted(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def load_annotations(
    path: str | Path,
    doc: PolicyDocument,
    known_metrics: Iterable[str] | None = None,
) -> AnnotationSet:
    """Read and validate an annotation TSV against its document.

    The file must carry the exact header ``metric_name  start_offset
    end_offset  text`` (tab-separated). Every row's text must equal the
    document substring at its offsets; a mismatch means the annotations
    belong to a different document revision and is a hard error. Rows
    naming metrics outside ``known_metrics`` (when given) are kept but
    flagged and warned about.
    """
    rows: list[tuple[str, AnnotatedSpan]] = []
    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedInput(f"{path}: missing header row") from None
        if tuple(header) != ANNOTATION_COLUMNS:
            raise MalformedInput(
                f"{path}: expected header {list(ANNOTATION_COLUMNS)}, got {header}"
            )
        for row_number, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(ANNOTATION_COLUMNS):
                raise MalformedInput(
                    f"{path}:{row_number}: expected {len(ANNOTATION_COLUMNS)} fields, "
                    f"got {len(row)}"
                )
            metric_name, start_text, end_text, text = row
            try:
                start, end = int(start_text), int(end_text)
            except ValueError:
                raise MalformedInput(
                    f"{path}:{row_number}: offsets must be integers"
                ) from None
            if not (0 <= start < end <= len(doc.full_text)):
                raise SpanTextMismatch(
                    f"{path}:{row_number}: span [{start}, {end}) outside document"
                )
            if doc.full_text[start:end] != text:
                raise SpanTextMismatch(
                    f"{path}:{row_number}: recorded text differs from document "
                    f"substring at [{start}, {end})"
                )
            rows.append((metric_name, AnnotatedSpan(start, end, text)))

    entries: dict[str, list[AnnotatedSpan]] = {}
    for metric_name, span in rows:
        entries.setdefault(metric_name, []).append(span)

    unknown: frozenset[str] = frozenset()
    if known_metrics is not None:
        known = set(known_metrics)
        unknown = frozenset(name for name in entries if name not in known)
        for name in sorted(unknown):
            warnings.warn(
                f"annotation references unknown metric {name!r}", UnknownMetricWarning
            )
    return AnnotationSet(
        doc_id=doc.doc_id,
        entries={name: tuple(spans) for name, spans in entries.items()},
        unknown_metrics=unknown,
    )


def save_annotations(annotations: AnnotationSet, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, delimiter="\t", lineterminator="\n")
        writer.writerow(ANNOTATION_COLUMNS)
        for metric_name in sorted(annotations.entries):
            for span in annotations.entries[metric_name]:
                writer.writerow([metric_name, span.start_offset, span.end_offset, span.text])


def _token_surfaces(text: str) -> list[str]:
    return [t.surface.casefold() for t in tokenize(text)]


def is_correct(answer: Answer, spans: Sequence[AnnotatedSpan]) -> bool:
    """Token-intersection correctness: any shared token with any span.

    All tokens count, stop words included; an unanswerable answer is never
    correct. The criterion is deliberately generous — "30 days" matches an
    annotation reading "60 days" through the shared "days" — which is why
    the stricter F1 exists as a side channel.
    """
    if not answer.answerable or not spans:
        return False
    answer_tokens = set(_token_surfaces(answer.text))
    if not answer_tokens:
        return False
    return any(answer_tokens & set(_token_surfaces(span.text)) for span in spans)


def strict_token_f1(answer: Answer, spans: Sequence[AnnotatedSpan]) -> float:
    """Best token-multiset F1 between the answer and any annotated span."""
    if not answer.answerable or not spans:
        return 0.0
    answer_counts = Counter(_token_surfaces(answer.text))
    if not answer_counts:
        return 0.0
    best = 0.0
    for span in spans:
        span_counts = Counter(_token_surfaces(span.text))
        overlap = sum((answer_counts & span_counts).values())
        if overlap == 0:
            continue
        precision = overlap / sum(answer_counts.values())
        recall = overlap / sum(span_counts.values())
        best = max(best, 2 * precision * recall / (precision + recall))
    return best


class _ResultLike(Protocol):
    metric_name: str
    doc_id: str
    pipeline: str
    answer: Answer


@dataclass(frozen=True)
class QualityReport:
    """Retrieval quality of one pipeline against annotated ground truth."""

    pipeline: str
    correct_count: int
    total_annotated: int
    score: float
    strict_f1_mean: float = 0.0  # supplementary diagnostic, not the headline number

    def to_dict(self) -> dict:
        return {
            "pipeline": self.pipeline,
            "correct_count": self.correct_count,
            "total_annotated": self.total_annotated,
            "score": self.score,
            "strict_f1_mean": self.strict_f1_mean,
        }


def _as_annotation_sets(
    annotations: AnnotationSet | Iterable[AnnotationSet],
) -> list[AnnotationSet]:
    if isinstance(annotations, AnnotationSet):
        return [annotations]
    return list(annotations)


def quality_score(
    results: Sequence[_ResultLike],
    annotations: AnnotationSet | Iterable[AnnotationSet],
) -> QualityReport:
    """Correctly retrieved over total annotated, for a single pipeline.

    The denominator is the number of annotated (document, metric) pairs;
    annotated metrics with no corresponding result count as incorrect.
    Results for metrics nobody annotated are ignored.
    """
    annotation_sets = _as_annotation_sets(annotations)
    pipelines = {r.pipeline for r in results}
    if len(pipelines) > 1:
        raise ValueError(
            f"quality_score expects one pipeline, got {sorted(pipelines)}; "
            "use quality_by_pipeline"
        )
    pipeline = next(iter(pipelines)) if pipelines else ""

    by_key: dict[tuple[str, str], _ResultLike] = {}
    for result in results:
        key = (result.doc_id, result.metric_name)
        if key in by_key:
            raise ValueError(f"duplicate result for {key} in pipeline {pipeline!r}")
        by_key[key] = result

    total = 0
    correct = 0
    f1_sum = 0.0
    for annotation_set in annotation_sets:
        for metric_name, spans in annotation_set.entries.items():
            total += 1
            result = by_key.get((annotation_set.doc_id, metric_name))
            if result is None:
                continue
            if is_correct(result.answer, spans):
                correct += 1
            f1_sum += strict_token_f1(result.answer, spans)

    score = correct / total if total else 0.0
    return QualityReport(
        pipeline=pipeline,
        correct_count=correct,
        total_annotated=total,
        score=score,
        strict_f1_mean=f1_sum / total if total else 0.0,
    )


def quality_by_pipeline(
    results: Sequence[_ResultLike],
    annotations: AnnotationSet | Iterable[AnnotationSet],
) -> list[QualityReport]:
    """One QualityReport per pipeline present in the results."""
    grouped: dict[str, list[_ResultLike]] = {}
    for result in results:
        grouped.setdefault(result.pipeline, []).append(result)
    return [
        quality_score(grouped[pipeline], annotations) for pipeline in sorted(grouped)
    ]


@dataclass(frozen=True)
class ErrorReport:
    """Distribution of reviewer-assigned error categories."""

    counts: dict[str, int]
    percentages: dict[str, float]
    filtered_accuracy: float

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def from_counts(
        cls,
        no_error: int,
        partial_matching: int,
        false_or_other: int,
        not_in_document: int,
    ) -> "ErrorReport":
        counts = {
            "NoError": no_error,
            "PartialMatching": partial_matching,
            "FalseOrOtherError": false_or_other,
            "NotInDocument": not_in_document,
        }
        total = sum(counts.values())
        percentages = {
            category: (100.0 * count / total if total else 0.0)
            for category, count in counts.items()
        }
        considered = total - not_in_document
        filtered_accuracy = no_error / considered if considered else 0.0
        return cls(
            counts=counts, percentages=percentages, filtered_accuracy=filtered_accuracy
        )

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "percentages": dict(self.percentages),
            "filtered_accuracy": self.filtered_accuracy,
            "total": self.total,
        }


def error_report(records: Iterable) -> ErrorReport:
    """Aggregate reviewer categories over reviewed evidence records.

    Every record must carry a reviewer-assigned category; reviewing is
    what produces the category, so unreviewed records are a caller error.
    """
    counts = {category: 0 for category in ERROR_CATEGORIES}
    for record in records:
        category = getattr(record, "reviewer_category", None)
        if not category:
            raise ValueError(
                f"record {getattr(record, 'record_id', '?')!r} has no reviewer category"
            )
        if category not in counts:
            raise ValueError(f"unknown reviewer category {category!r}")
        counts[category] += 1
    return ErrorReport.from_counts(
        counts["NoError"],
        counts["PartialMatching"],
        counts["FalseOrOtherError"],
        counts["NotInDocument"],
    )
