"""Evidence records: the unit of work a human reviewer acts on.

A record freezes one pipeline's answer for one metric on one document,
together with its assessment hint. It starts ``Pending`` and moves exactly
once to ``Approved`` or ``Rejected``, at which point the reviewer also
assigns an error category (the same four categories the error report
aggregates). Record ids are deterministic in (doc, metric, pipeline), which
is what makes re-extraction idempotent.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from .answerers import Answer
from .assessment import AssessmentHint, assess
from .evaluation import ERROR_CATEGORIES
from .metrics import Metric
from .pipelines import ExtractionResult, SectionScore

__all__ = [
    "STATUSES",
    "EvidenceRecord",
    "record_id_for",
    "build_record",
    "utc_now_iso",
]

STATUSES = ("Pending", "Approved", "Rejected")


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def record_id_for(doc_id: str, metric_name: str, pipeline: str) -> str:
    digest = hashlib.sha256(
        "\x1f".join((doc_id, metric_name, pipeline)).encode("utf-8")
    ).hexdigest()
    return f"r-{digest[:12]}"


@dataclass(frozen=True)
class EvidenceRecord:
    record_id: str
    metric_name: str
    doc_id: str
    pipeline: str
    answer: Answer
    assessment: AssessmentHint
    status: str = "Pending"
    reviewer_category: str | None = None
    reviewer_comment: str | None = None
    created_at: str | None = None
    reviewed_at: str | None = None
    winning_section_id: str | None = None
    section_scores: tuple[SectionScore, ...] = ()
    duration_ms: int = 0

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "Pending":
            if self.reviewer_category is not None:
                raise ValueError("a Pending record cannot carry a reviewer category")
            if self.reviewed_at is not None:
                raise ValueError("a Pending record cannot carry a review timestamp")
        else:
            if self.reviewed_at is None:
                raise ValueError(f"a {self.status} record needs reviewed_at")
            if self.reviewer_category not in ERROR_CATEGORIES:
                raise ValueError(
                    f"reviewed record needs a category from {ERROR_CATEGORIES}"
                )

    def with_review(
        self,
        decision: str,
        category: str,
        comment: str | None = None,
        reviewed_at: str | None = None,
    ) -> "EvidenceRecord":
        """One-shot transition Pending -> Approved/Rejected."""
        if self.status != "Pending":
            raise ValueError(f"record {self.record_id} was already reviewed")
        if decision not in ("approve", "reject"):
            raise ValueError(f"decision must be approve or reject, got {decision!r}")
        if category not in ERROR_CATEGORIES:
            raise ValueError(f"category must be one of {ERROR_CATEGORIES}")
        return replace(
            self,
            status="Approved" if decision == "approve" else "Rejected",
            reviewer_category=category,
            reviewer_comment=comment,
            reviewed_at=reviewed_at or utc_now_iso(),
        )

    def to_dict(self, deterministic: bool = False) -> dict:
        """JSON form; ``deterministic`` drops run-dependent fields.

        The deterministic form is what the CLI emits, so identical inputs
        produce identical bytes; timestamps and wall-clock durations stay
        in the service's stored form only.
        """
        data: dict = {
            "record_id": self.record_id,
            "metric_name": self.metric_name,
            "doc_id": self.doc_id,
            "pipeline": self.pipeline,
            "answer": self.answer.to_dict(),
            "assessment": self.assessment.to_dict(),
            "status": self.status,
        }
        if self.reviewer_category is not None:
            data["reviewer_category"] = self.reviewer_category
        if self.reviewer_comment is not None:
            data["reviewer_comment"] = self.reviewer_comment
        if self.winning_section_id is not None:
            data["winning_section_id"] = self.winning_section_id
        if self.section_scores:
            data["section_scores"] = [s.to_dict() for s in self.section_scores]
        if not deterministic:
            if self.created_at is not None:
                data["created_at"] = self.created_at
            if self.reviewed_at is not None:
                data["reviewed_at"] = self.reviewed_at
            data["duration_ms"] = self.duration_ms
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "EvidenceRecord":
        return cls(
            record_id=data["record_id"],
            metric_name=data["metric_name"],
            doc_id=data["doc_id"],
            pipeline=data["pipeline"],
            answer=Answer.from_dict(data["answer"]),
            assessment=AssessmentHint.from_dict(data["assessment"]),
            status=data.get("status", "Pending"),
            reviewer_category=data.get("reviewer_category"),
            reviewer_comment=data.get("reviewer_comment"),
            created_at=data.get("created_at"),
            reviewed_at=data.get("reviewed_at"),
            winning_section_id=data.get("winning_section_id"),
            section_scores=tuple(
                SectionScore(
                    section_id=s["section_id"],
                    model_score=s.get("model_score"),
                    similarity=s.get("similarity"),
                )
                for s in data.get("section_scores", ())
            ),
            duration_ms=int(data.get("duration_ms", 0)),
        )


def build_record(
    result: ExtractionResult, metric: Metric, created_at: str | None = None
) -> EvidenceRecord:
    """Wrap an extraction result and its assessment into a Pending record."""
    if result.metric_name != metric.name:
        raise ValueError(
            f"result belongs to metric {result.metric_name!r}, not {metric.name!r}"
        )
    return EvidenceRecord(
        record_id=record_id_for(result.doc_id, result.metric_name, result.pipeline),
        metric_name=result.metric_name,
        doc_id=result.doc_id,
        pipeline=result.pipeline,
        answer=result.answer,
        assessment=assess(result.answer, metric),
        status="Pending",
        created_at=created_at if created_at is not None else utc_now_iso(),
        winning_section_id=result.winning_section_id,
        section_scores=result.section_scores,
        duration_ms=result.duration_ms,
    )
