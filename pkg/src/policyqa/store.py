"""Durable on-disk store for documents, metrics, and evidence records.

One JSON file per collection under a store directory, rewritten atomically
(write to a temp file in the same directory, fsync, rename). That is all
the durability desk-scale audit data needs, and it keeps the whole state
inspectable with a text editor. Mutations are serialized per collection
with a lock; readers get immutable snapshots.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path

from .documents import PolicyDocument
from .metrics import Metric, MetricCatalog
from .records import EvidenceRecord

__all__ = ["Store"]

_COLLECTIONS = ("documents", "metrics", "records")


class Store:
    def __init__(self, store_dir: str | Path) -> None:
        self.store_dir = Path(store_dir)
        self.store_dir.mkdir(parents=True, exist_ok=True)
        self._locks = {name: threading.Lock() for name in _COLLECTIONS}
        self._documents: dict[str, dict] = self._load("documents", {})
        self._metrics: list[dict] = self._load("metrics", [])
        self._records: dict[str, dict] = self._load("records", {})

    # -- file plumbing --

    def _path(self, collection: str) -> Path:
        return self.store_dir / f"{collection}.json"

    def _load(self, collection: str, default):
        path = self._path(collection)
        if not path.exists():
            return default
        with path.open("r", encoding="utf-8") as handle:
            return json.load(handle)

    def _write(self, collection: str, payload) -> None:
        fd, temp_name = tempfile.mkstemp(
            dir=self.store_dir, prefix=f".{collection}-", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, ensure_ascii=False, indent=1)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(temp_name, self._path(collection))
        except BaseException:
            try:
                os.unlink(temp_name)
            except OSError:
                pass
            raise

    # -- documents --

    def put_document(self, doc: PolicyDocument) -> str:
        with self._locks["documents"]:
            self._documents[doc.doc_id] = doc.to_dict()
            self._write("documents", self._documents)
        return doc.doc_id

    def get_document(self, doc_id: str) -> PolicyDocument:
        data = self._documents.get(doc_id)
        if data is None:
            raise KeyError(f"no document {doc_id!r}")
        return PolicyDocument.from_dict(data)

    def has_document(self, doc_id: str) -> bool:
        return doc_id in self._documents

    def list_documents(self) -> list[dict]:
        summaries = []
        for data in self._documents.values():
            summaries.append(
                {
                    "doc_id": data["doc_id"],
                    "title": data.get("title", ""),
                    "source_name": data.get("source_name", ""),
                    "section_count": len(data.get("sections", ())),
                }
            )
        return sorted(summaries, key=lambda s: s["doc_id"])

    # -- metrics --

    def put_metrics(self, catalog: MetricCatalog) -> int:
        with self._locks["metrics"]:
            self._metrics = [metric.to_dict() for metric in catalog]
            self._write("metrics", self._metrics)
        return len(self._metrics)

    def get_metrics(self) -> MetricCatalog:
        return MetricCatalog(
            metrics=tuple(Metric.from_dict(entry) for entry in self._metrics)
        )

    # -- records --

    def put_record(self, record: EvidenceRecord) -> None:
        if record.doc_id not in self._documents:
            raise KeyError(f"record references unknown document {record.doc_id!r}")
        if not any(entry["name"] == record.metric_name for entry in self._metrics):
            raise KeyError(f"record references unknown metric {record.metric_name!r}")
        with self._locks["records"]:
            self._records[record.record_id] = record.to_dict()
            self._write("records", self._records)

    def get_record(self, record_id: str) -> EvidenceRecord:
        data = self._records.get(record_id)
        if data is None:
            raise KeyError(f"no record {record_id!r}")
        return EvidenceRecord.from_dict(data)

    def has_record(self, record_id: str) -> bool:
        return record_id in self._records

    def list_records(
        self, doc_id: str | None = None, status: str | None = None
    ) -> list[EvidenceRecord]:
        records = [EvidenceRecord.from_dict(data) for data in self._records.values()]
        if doc_id is not None:
            records = [r for r in records if r.doc_id == doc_id]
        if status is not None:
            records = [r for r in records if r.status == status]
        records.sort(key=lambda r: (r.doc_id, r.metric_name, r.pipeline))
        return records
