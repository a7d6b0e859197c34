from __future__ import annotations

import json

import pytest

from policyqa.answerers import AnswererConfig, LexicalBaselineAnswerer
from policyqa.pipelines import extract_keyword
from policyqa.records import (
    STATUSES,
    EvidenceRecord,
    build_record,
    record_id_for,
    utc_now_iso,
)
from policyqa.store import Store

from .util import make_doc


@pytest.fixture()
def record(password_doc, password_metric):
    answerer = LexicalBaselineAnswerer(AnswererConfig())
    result = extract_keyword(password_doc, password_metric, answerer)
    return build_record(result, password_metric)


class TestRecordIds:
    def test_deterministic(self):
        first = record_id_for("doc-1", "M1", "keyword")
        second = record_id_for("doc-1", "M1", "keyword")
        assert first == second
        assert first.startswith("r-") and len(first) == 14

    def test_distinct_inputs_distinct_ids(self):
        base = record_id_for("doc-1", "M1", "keyword")
        assert record_id_for("doc-2", "M1", "keyword") != base
        assert record_id_for("doc-1", "M2", "keyword") != base
        assert record_id_for("doc-1", "M1", "score") != base

    def test_separator_prevents_field_bleed(self):
        assert record_id_for("doc-1x", "M1", "p") != record_id_for("doc-1", "xM1", "p")


class TestBuildRecord:
    def test_carries_extraction_and_assessment(self, record, password_doc):
        assert record.metric_name == "PasswordPolicyQ2"
        assert record.doc_id == password_doc.doc_id
        assert record.pipeline == "keyword"
        assert record.status == "Pending"
        assert record.assessment.rendered == "60 ≤ 100 → True"
        assert record.assessment.outcome == "Compliant"
        assert record.winning_section_id == "s0001"
        assert record.created_at  # stamped at build time

    def test_record_id_matches_convention(self, record, password_doc):
        assert record.record_id == record_id_for(
            password_doc.doc_id, "PasswordPolicyQ2", "keyword"
        )


class TestReviewStateMachine:
    def test_statuses_vocabulary(self):
        assert STATUSES == ("Pending", "Approved", "Rejected")

    def test_approve(self, record):
        reviewed = record.with_review("approve", "NoError", comment="looks right")
        assert reviewed.status == "Approved"
        assert reviewed.reviewer_category == "NoError"
        assert reviewed.reviewer_comment == "looks right"
        assert reviewed.reviewed_at is not None
        # review does not touch the extraction payload
        assert reviewed.answer == record.answer
        assert reviewed.assessment == record.assessment

    def test_reject(self, record):
        reviewed = record.with_review("reject", "NotInDocument")
        assert reviewed.status == "Rejected"
        assert reviewed.reviewer_category == "NotInDocument"

    def test_review_is_one_shot(self, record):
        reviewed = record.with_review("approve", "NoError")
        with pytest.raises(ValueError):
            reviewed.with_review("reject", "FalseOrOtherError")

    def test_unknown_decision_rejected(self, record):
        with pytest.raises(ValueError):
            record.with_review("maybe", "NoError")

    def test_unknown_category_rejected(self, record):
        with pytest.raises(ValueError):
            record.with_review("approve", "LooksFine")

    def test_pending_must_not_carry_review_fields(self, record):
        with pytest.raises(ValueError):
            EvidenceRecord(
                record_id=record.record_id,
                metric_name=record.metric_name,
                doc_id=record.doc_id,
                pipeline=record.pipeline,
                answer=record.answer,
                assessment=record.assessment,
                status="Pending",
                reviewer_category="NoError",
            )

    def test_reviewed_must_carry_category_and_timestamp(self, record):
        with pytest.raises(ValueError):
            EvidenceRecord(
                record_id=record.record_id,
                metric_name=record.metric_name,
                doc_id=record.doc_id,
                pipeline=record.pipeline,
                answer=record.answer,
                assessment=record.assessment,
                status="Approved",
            )

    def test_unknown_status_rejected(self, record):
        with pytest.raises(ValueError):
            EvidenceRecord(
                record_id=record.record_id,
                metric_name=record.metric_name,
                doc_id=record.doc_id,
                pipeline=record.pipeline,
                answer=record.answer,
                assessment=record.assessment,
                status="Archived",
            )

    def test_explicit_review_timestamp_honoured(self, record):
        stamp = "2024-05-01T12:00:00+00:00"
        reviewed = record.with_review("approve", "NoError", reviewed_at=stamp)
        assert reviewed.reviewed_at == stamp


class TestRecordSerialization:
    def test_round_trip(self, record):
        clone = EvidenceRecord.from_dict(record.to_dict())
        assert clone == record

    def test_round_trip_reviewed(self, record):
        reviewed = record.with_review("approve", "NoError", comment="ok")
        clone = EvidenceRecord.from_dict(reviewed.to_dict())
        assert clone == reviewed

    def test_deterministic_form_drops_volatile_fields(self, record):
        data = record.to_dict(deterministic=True)
        assert "created_at" not in data
        assert "reviewed_at" not in data
        assert "duration_ms" not in data
        # and is byte-stable across identical extractions
        assert json.dumps(data, sort_keys=True) == json.dumps(
            record.to_dict(deterministic=True), sort_keys=True
        )

    def test_timestamp_format(self):
        stamp = utc_now_iso()
        assert stamp.endswith("+00:00")
        assert "T" in stamp


class TestStore:
    def test_document_round_trip(self, tmp_path, password_doc):
        store = Store(tmp_path / "store")
        store.put_document(password_doc)
        assert store.has_document(password_doc.doc_id)
        assert store.get_document(password_doc.doc_id) == password_doc

    def test_get_missing_document_raises(self, tmp_path):
        store = Store(tmp_path / "store")
        with pytest.raises(KeyError):
            store.get_document("doc-nope")

    def test_list_documents_sorted_summaries(self, tmp_path):
        store = Store(tmp_path / "store")
        store.put_document(make_doc([("B", "b text.")], doc_id="doc-bbb", title="B Doc"))
        store.put_document(make_doc([("A", "a text.")], doc_id="doc-aaa", title="A Doc"))
        summaries = store.list_documents()
        assert [s["doc_id"] for s in summaries] == ["doc-aaa", "doc-bbb"]
        assert summaries[0]["title"] == "A Doc"
        assert summaries[0]["section_count"] == 1

    def test_metrics_round_trip(self, tmp_path, catalog):
        store = Store(tmp_path / "store")
        assert store.put_metrics(catalog) == len(catalog)
        assert list(store.get_metrics()) == list(catalog)

    def test_record_round_trip(self, tmp_path, password_doc, catalog, record):
        store = Store(tmp_path / "store")
        store.put_document(password_doc)
        store.put_metrics(catalog)
        store.put_record(record)
        assert store.has_record(record.record_id)
        assert store.get_record(record.record_id) == record

    def test_referential_integrity(self, tmp_path, password_doc, catalog, record):
        store = Store(tmp_path / "store")
        with pytest.raises(KeyError):
            store.put_record(record)  # document not stored yet
        store.put_document(password_doc)
        with pytest.raises(KeyError):
            store.put_record(record)  # metrics not stored yet
        store.put_metrics(catalog)
        store.put_record(record)

    def test_replace_record_in_place(self, tmp_path, password_doc, catalog, record):
        store = Store(tmp_path / "store")
        store.put_document(password_doc)
        store.put_metrics(catalog)
        store.put_record(record)
        reviewed = record.with_review("approve", "NoError")
        store.put_record(reviewed)
        assert store.get_record(record.record_id).status == "Approved"
        assert len(store.list_records()) == 1

    def test_list_records_filters(self, tmp_path, password_doc, catalog, record):
        store = Store(tmp_path / "store")
        store.put_document(password_doc)
        store.put_metrics(catalog)
        store.put_record(record)
        reviewed = record.with_review("approve", "NoError")
        store.put_record(reviewed)
        assert store.list_records(status="Approved") == [reviewed]
        assert store.list_records(status="Pending") == []
        assert store.list_records(doc_id=password_doc.doc_id) == [reviewed]
        assert store.list_records(doc_id="doc-other") == []

    def test_restart_preserves_everything(self, tmp_path, password_doc, catalog, record):
        store_dir = tmp_path / "store"
        first = Store(store_dir)
        first.put_document(password_doc)
        first.put_metrics(catalog)
        first.put_record(record.with_review("approve", "NoError"))

        second = Store(store_dir)  # fresh process, same directory
        assert second.get_document(password_doc.doc_id) == password_doc
        assert list(second.get_metrics()) == list(catalog)
        restored = second.get_record(record.record_id)
        assert restored.status == "Approved"
        assert restored.reviewer_category == "NoError"

    def test_listing_is_deterministically_ordered(self, tmp_path, password_doc, catalog):
        store = Store(tmp_path / "store")
        store.put_document(password_doc)
        store.put_metrics(catalog)
        answerer = LexicalBaselineAnswerer(AnswererConfig())
        names = ["RetentionQ1", "PasswordPolicyQ2", "IncidentReportingQ1"]
        for name in names:
            result = extract_keyword(password_doc, catalog.get(name), answerer)
            store.put_record(build_record(result, catalog.get(name)))
        listed = store.list_records()
        assert [r.metric_name for r in listed] == sorted(names)
