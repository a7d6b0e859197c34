"""HTTP service: document ingestion, extraction runs, and the review flow.

The REST surface is the only interface the review UI is allowed to use:

* ``POST /documents`` (multipart or raw HTML) / ``GET /documents[/{id}]``
* ``PUT /metrics`` / ``GET /metrics``
* ``POST /extract`` — creates Pending evidence records, idempotently per
  (document, metric, pipeline): re-running replaces a Pending record and
  never touches a reviewed one.
* ``GET /records``, ``GET /records/{id}``, ``GET /records/{id}/context``
* ``POST /records/{id}/review`` — the single Pending→Approved/Rejected
  transition; a second review is a 409.
* ``GET /reports/quality``, ``GET /reports/errors``

Uploads are parsed with the stdlib email parser rather than a multipart
dependency; desk-scale uploads do not need streaming.
"""

from __future__ import annotations

import email
import email.policy
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse
from pydantic import BaseModel

from .answerers import get_answerer
from .config import ServiceConfig
from .documents import document_to_html, normalize_html, render_highlighted
from .errors import (
    CatalogError,
    EmptyDocument,
    MalformedInput,
    RemoteError,
    RemoteTimeout,
    SpanMappingError,
    SpanTextMismatch,
)
from .evaluation import (
    ERROR_CATEGORIES,
    error_report,
    load_annotations,
    quality_by_pipeline,
)
from .metrics import load_catalog
from .pipelines import PIPELINES, extract
from .records import build_record, record_id_for, utc_now_iso
from .store import Store

__all__ = ["create_app"]


class ExtractRequest(BaseModel):
    doc_id: str
    pipeline: str
    metric_names: list[str] | None = None


class ReviewRequest(BaseModel):
    decision: str
    category: str
    comment: str | None = None


def _parse_multipart_html(content_type: str, body: bytes) -> tuple[str, str]:
    """Extract (html, filename) from a multipart/form-data body."""
    preamble = (
        b"Content-Type: " + content_type.encode("latin-1") + b"\r\nMIME-Version: 1.0\r\n\r\n"
    )
    message = email.message_from_bytes(preamble + body, policy=email.policy.HTTP)
    if not message.is_multipart():
        raise MalformedInput("multipart body could not be parsed")
    chosen = None
    for part in message.iter_parts():
        if part.get_filename():
            chosen = part
            break
        if chosen is None:
            chosen = part
    if chosen is None:
        raise MalformedInput("multipart body has no parts")
    payload = chosen.get_payload(decode=True)
    if payload is None:
        raise MalformedInput("multipart part has no payload")
    return payload.decode("utf-8", errors="replace"), chosen.get_filename() or ""


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    if config is None:
        config = ServiceConfig()
    store = Store(config.store_dir)
    answerer = get_answerer(config.answerer_config())
    stopwords = config.stopword_list()
    vectors = config.vector_table()

    app = FastAPI(title="policyqa", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.config = config

    # one lock per record id so a (doc, metric, pipeline) extraction or a
    # review never races itself; the registry lock guards the dict only
    record_locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()

    def lock_for(record_id: str) -> threading.Lock:
        with registry_lock:
            return record_locks.setdefault(record_id, threading.Lock())

    # -- error mapping --

    @app.exception_handler(KeyError)
    async def not_found(_request: Request, exc: KeyError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def unprocessable(_request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    for exc_type in (EmptyDocument, MalformedInput, CatalogError, SpanTextMismatch, SpanMappingError):

        @app.exception_handler(exc_type)
        async def _invalid(_request: Request, exc: Exception):
            return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(RemoteTimeout)
    async def gateway_timeout(_request: Request, exc: RemoteTimeout):
        return JSONResponse(status_code=504, content={"detail": str(exc)})

    @app.exception_handler(RemoteError)
    async def bad_gateway(_request: Request, exc: RemoteError):
        return JSONResponse(status_code=502, content={"detail": str(exc)})

    # -- health --

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    # -- documents --

    @app.post("/documents", status_code=201)
    async def upload_document(request: Request, source_name: str = "") -> dict:
        body = await request.body()
        content_type = request.headers.get("content-type", "")
        if content_type.lower().startswith("multipart/"):
            html, filename = _parse_multipart_html(content_type, body)
            source_name = source_name or filename
        else:
            html = body.decode("utf-8", errors="replace")
        doc = normalize_html(html, source_name=source_name)
        store.put_document(doc)
        return {
            "doc_id": doc.doc_id,
            "title": doc.title,
            "section_count": len(doc.sections),
        }

    @app.get("/documents")
    def list_documents() -> list[dict]:
        return store.list_documents()

    @app.get("/documents/{doc_id}")
    def get_document(doc_id: str) -> dict:
        return store.get_document(doc_id).to_dict()

    # -- metrics --

    @app.put("/metrics")
    async def put_metrics(request: Request) -> dict:
        body = await request.body()
        catalog = load_catalog(body.decode("utf-8"))
        count = store.put_metrics(catalog)
        return {"count": count}

    @app.get("/metrics")
    def get_metrics() -> list[dict]:
        return [metric.to_dict() for metric in store.get_metrics()]

    # -- extraction --

    @app.post("/extract")
    def run_extraction(request: ExtractRequest) -> list[dict]:
        if request.pipeline not in PIPELINES:
            raise HTTPException(
                status_code=422,
                detail=f"pipeline must be one of {list(PIPELINES)}",
            )
        if request.pipeline in ("similarity", "similarity_score") and vectors is None:
            raise HTTPException(
                status_code=422,
                detail=f"pipeline {request.pipeline!r} needs a configured vector table",
            )
        doc = store.get_document(request.doc_id)
        catalog = store.get_metrics()
        if request.metric_names is None:
            wanted = list(catalog)
        else:
            wanted = [catalog.get(name) for name in request.metric_names]
        out: list[dict] = []
        for metric in wanted:
            rid = record_id_for(doc.doc_id, metric.name, request.pipeline)
            with lock_for(rid):
                if store.has_record(rid):
                    existing = store.get_record(rid)
                    if existing.status != "Pending":
                        out.append(existing.to_dict())
                        continue
                result = extract(
                    doc,
                    metric,
                    request.pipeline,
                    answerer,
                    vectors,
                    stopwords,
                    empty_keywords_fallback=config.empty_keywords_fallback,
                )
                record = build_record(result, metric, created_at=utc_now_iso())
                store.put_record(record)
                out.append(record.to_dict())
        return out

    # -- records & review --

    @app.get("/records")
    def list_records(doc_id: str | None = None, status: str | None = None) -> list[dict]:
        if status is not None and status not in ("Pending", "Approved", "Rejected"):
            raise HTTPException(status_code=422, detail=f"unknown status {status!r}")
        return [record.to_dict() for record in store.list_records(doc_id, status)]

    @app.get("/records/{record_id}")
    def get_record(record_id: str) -> dict:
        return store.get_record(record_id).to_dict()

    @app.get("/records/{record_id}/context", response_class=HTMLResponse)
    def record_context(record_id: str) -> str:
        record = store.get_record(record_id)
        doc = store.get_document(record.doc_id)
        if record.answer.answerable and record.answer.start_offset < record.answer.end_offset:
            return render_highlighted(
                doc, (record.answer.start_offset, record.answer.end_offset)
            )
        return document_to_html(doc)

    @app.post("/records/{record_id}/review")
    def review_record(record_id: str, review: ReviewRequest) -> dict:
        if review.decision not in ("approve", "reject"):
            raise HTTPException(
                status_code=422, detail="decision must be approve or reject"
            )
        if review.category not in ERROR_CATEGORIES:
            raise HTTPException(
                status_code=422,
                detail=f"category must be one of {list(ERROR_CATEGORIES)}",
            )
        with lock_for(record_id):
            record = store.get_record(record_id)
            if record.status != "Pending":
                raise HTTPException(
                    status_code=409,
                    detail=f"record {record_id} is already {record.status}",
                )
            updated = record.with_review(
                review.decision, review.category, review.comment
            )
            store.put_record(updated)
        return updated.to_dict()

    # -- reports --

    @app.get("/reports/quality")
    def quality_report(doc_id: str, annotations_ref: str) -> list[dict]:
        doc = store.get_document(doc_id)
        path = Path(annotations_ref)
        if not path.is_file():
            raise HTTPException(
                status_code=422, detail=f"annotations file {annotations_ref!r} not found"
            )
        annotations = load_annotations(
            path, doc, known_metrics=store.get_metrics().names()
        )
        records = store.list_records(doc_id=doc_id)
        return [report.to_dict() for report in quality_by_pipeline(records, annotations)]

    @app.get("/reports/errors")
    def errors_report(doc_id: str) -> dict:
        store.get_document(doc_id)  # 404 when unknown
        reviewed = [
            record
            for record in store.list_records(doc_id=doc_id)
            if record.status != "Pending"
        ]
        return error_report(reviewed).to_dict()

    # -- optional static UI --

    if config.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
