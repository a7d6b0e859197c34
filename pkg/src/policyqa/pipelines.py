"""The five evidence-extraction strategies.

Every pipeline maps (document, metric, answerer) to one candidate
evidence span, differing only in how much of the document the answerer
gets to see:

* ``whole_doc``   — the entire document as one context.
* ``keyword``     — sections whose heading lemmas intersect the metric's
                    prepared keywords, concatenated; whole document when
                    nothing matches.
* ``score``       — answerer runs per section; highest model score wins.
* ``similarity``  — sections ranked by cosine similarity between keyword
                    and section embeddings; the answerer only sees the
                    winner.
* ``similarity_score`` — per-section model score plus cosine similarity;
                    highest sum wins.

All returned answers carry document-global offsets, whatever context the
answerer actually saw. Ties are always broken toward the earliest
section, so results are reproducible regardless of evaluation order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

from .answerers import Answer, Answerer
from .documents import PolicyDocument, Section
from .embeddings import WordVectorTable, cosine, sentence_vector
from .errors import EmptyKeywords, SpanMappingError
from .metrics import Metric, prepare_keywords
from .textprep import StopwordList, content_lemmas, default_stopwords

__all__ = [
    "PIPELINES",
    "SectionScore",
    "ExtractionResult",
    "extract_whole_doc",
    "extract_keyword",
    "extract_score",
    "extract_similarity",
    "extract_similarity_score",
    "extract",
    "run_all",
]

PIPELINES = ("whole_doc", "keyword", "score", "similarity", "similarity_score")

_SEGMENT_SEP = "\n\n"


@dataclass(frozen=True)
class SectionScore:
    """Per-section evidence for how a pipeline ranked the document."""

    section_id: str
    model_score: float | None = None
    similarity: float | None = None

    def to_dict(self) -> dict:
        return {
            "section_id": self.section_id,
            "model_score": self.model_score,
            "similarity": self.similarity,
        }


@dataclass(frozen=True)
class ExtractionResult:
    """One pipeline's evidence candidate for one metric on one document."""

    metric_name: str
    doc_id: str
    pipeline: str
    answer: Answer
    winning_section_id: str | None = None
    section_scores: tuple[SectionScore, ...] = ()
    duration_ms: int = 0

    def to_dict(self) -> dict:
        return {
            "metric_name": self.metric_name,
            "doc_id": self.doc_id,
            "pipeline": self.pipeline,
            "answer": self.answer.to_dict(),
            "winning_section_id": self.winning_section_id,
            "section_scores": [s.to_dict() for s in self.section_scores],
            "duration_ms": self.duration_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExtractionResult":
        return cls(
            metric_name=data["metric_name"],
            doc_id=data["doc_id"],
            pipeline=data["pipeline"],
            answer=Answer.from_dict(data["answer"]),
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


class _Timer:
    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = int(round((time.perf_counter() - self._t0) * 1000))
        return False


def _remap_answer(
    answer: Answer,
    segments: list[tuple[int, int, int]],
    full_text: str,
) -> Answer:
    """Translate context-relative offsets to document-global offsets.

    ``segments`` rows are (context_start, context_end, document_start) for
    each contiguous piece of the context. Answers that cross a segment
    boundary (possible with a remote answerer) are located by exact text
    search; if the text cannot be found verbatim the span is unmappable.
    """
    if not answer.answerable or answer.start_offset == answer.end_offset:
        return replace(answer, start_offset=0, end_offset=0)
    for context_start, context_end, document_start in segments:
        if context_start <= answer.start_offset and answer.end_offset <= context_end:
            delta = document_start - context_start
            new_start = answer.start_offset + delta
            new_end = answer.end_offset + delta
            if full_text[new_start:new_end] == answer.text:
                return replace(answer, start_offset=new_start, end_offset=new_end)
            break
    position = full_text.find(answer.text)
    if position >= 0:
        return replace(
            answer, start_offset=position, end_offset=position + len(answer.text)
        )
    raise SpanMappingError(
        f"answer text ({len(answer.text)} chars) not found in document"
    )


def _section_containing(doc: PolicyDocument, offset: int) -> str | None:
    for section in doc.sections:
        if section.start_offset <= offset < section.end_offset:
            return section.section_id
    return None


def _whole_doc_segments(doc: PolicyDocument) -> list[tuple[int, int, int]]:
    return [(0, len(doc.full_text), 0)]


def extract_whole_doc(
    doc: PolicyDocument, metric: Metric, answerer: Answerer
) -> ExtractionResult:
    """Feed the entire document to the answerer as a single context."""
    with _Timer() as timer:
        raw = answerer(metric.description, doc.full_text)
        answer = _remap_answer(raw, _whole_doc_segments(doc), doc.full_text)
    return ExtractionResult(
        metric_name=metric.name,
        doc_id=doc.doc_id,
        pipeline="whole_doc",
        answer=answer,
        winning_section_id=(
            _section_containing(doc, answer.start_offset) if answer.answerable else None
        ),
        section_scores=(),
        duration_ms=timer.ms,
    )


def extract_keyword(
    doc: PolicyDocument,
    metric: Metric,
    answerer: Answerer,
    stopwords: StopwordList | None = None,
) -> ExtractionResult:
    """Restrict the context to sections whose headings share a keyword.

    A section is relevant when its heading's content lemmas intersect the
    metric's prepared keywords. Relevant sections are concatenated in
    document order, separated by a blank line. With no relevant section
    (including the empty-keyword case) the whole document is the context,
    so the answer matches ``extract_whole_doc`` exactly.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    with _Timer() as timer:
        keywords = set(prepare_keywords(metric, stopwords))
        matched: list[Section] = []
        if keywords:
            for section in doc.sections:
                heading_lemmas = set(content_lemmas(section.heading, stopwords))
                if heading_lemmas & keywords:
                    matched.append(section)
        if matched:
            segments = []
            parts = []
            position = 0
            for section in matched:
                if parts:
                    parts.append(_SEGMENT_SEP)
                    position += len(_SEGMENT_SEP)
                text = section.text
                segments.append((position, position + len(text), section.start_offset))
                parts.append(text)
                position += len(text)
            context = "".join(parts)
        else:
            segments = _whole_doc_segments(doc)
            context = doc.full_text
        raw = answerer(metric.description, context)
        answer = _remap_answer(raw, segments, doc.full_text)
    return ExtractionResult(
        metric_name=metric.name,
        doc_id=doc.doc_id,
        pipeline="keyword",
        answer=answer,
        winning_section_id=(
            _section_containing(doc, answer.start_offset) if answer.answerable else None
        ),
        section_scores=tuple(SectionScore(s.section_id) for s in matched),
        duration_ms=timer.ms,
    )


def _no_answer_aggregate(per_section: list[Answer]) -> Answer:
    # confidence of the aggregate no-answer = the strongest per-section one
    confidence = max((a.score for a in per_section), default=1.0)
    return Answer(text="", start_offset=0, end_offset=0, score=confidence, answerable=False)


def extract_score(
    doc: PolicyDocument, metric: Metric, answerer: Answerer
) -> ExtractionResult:
    """Ask every section, keep the answer the model scored highest."""
    with _Timer() as timer:
        answers: list[Answer] = []
        scores: list[SectionScore] = []
        for section in doc.sections:
            raw = answerer(metric.description, section.text)
            answers.append(raw)
            scores.append(
                SectionScore(
                    section_id=section.section_id,
                    model_score=raw.score if raw.answerable else None,
                )
            )
        winner_index: int | None = None
        for index, raw in enumerate(answers):
            if not raw.answerable:
                continue
            if winner_index is None or raw.score > answers[winner_index].score:
                winner_index = index
        if winner_index is None:
            answer = _no_answer_aggregate(answers)
            winning_id = None
        else:
            section = doc.sections[winner_index]
            segments = [(0, len(section.text), section.start_offset)]
            answer = _remap_answer(answers[winner_index], segments, doc.full_text)
            winning_id = section.section_id
    return ExtractionResult(
        metric_name=metric.name,
        doc_id=doc.doc_id,
        pipeline="score",
        answer=answer,
        winning_section_id=winning_id,
        section_scores=tuple(scores),
        duration_ms=timer.ms,
    )


def _section_similarities(
    doc: PolicyDocument,
    keyword_lemmas: list[str],
    vectors: WordVectorTable,
    stopwords: StopwordList,
) -> list[float]:
    query = sentence_vector(keyword_lemmas, vectors)
    sims = []
    for section in doc.sections:
        lemmas = content_lemmas(section.text, stopwords)
        sims.append(cosine(query, sentence_vector(lemmas, vectors)))
    return sims


def extract_similarity(
    doc: PolicyDocument,
    metric: Metric,
    answerer: Answerer,
    vectors: WordVectorTable,
    stopwords: StopwordList | None = None,
    empty_keywords_fallback: bool = True,
) -> ExtractionResult:
    """Rank sections by embedding similarity to the metric keywords.

    The winner is chosen by cosine similarity alone; only the winning
    section is handed to the answerer. Keywords that prepare to an empty
    set leave similarity undefined: by default the score pipeline takes
    over (the result keeps the ``similarity`` label), or with
    ``empty_keywords_fallback=False`` this raises
    :class:`~policyqa.errors.EmptyKeywords`.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    keyword_lemmas = prepare_keywords(metric, stopwords)
    if not keyword_lemmas:
        if not empty_keywords_fallback:
            raise EmptyKeywords(metric.name)
        fallback = extract_score(doc, metric, answerer)
        return replace(fallback, pipeline="similarity")
    if not doc.sections:
        fallback = extract_score(doc, metric, answerer)
        return replace(fallback, pipeline="similarity")
    with _Timer() as timer:
        sims = _section_similarities(doc, keyword_lemmas, vectors, stopwords)
        winner_index = max(range(len(sims)), key=lambda i: (sims[i], -i))
        section = doc.sections[winner_index]
        raw = answerer(metric.description, section.text)
        segments = [(0, len(section.text), section.start_offset)]
        answer = _remap_answer(raw, segments, doc.full_text)
        scores = tuple(
            SectionScore(
                section_id=s.section_id,
                model_score=(
                    raw.score if index == winner_index and raw.answerable else None
                ),
                similarity=sims[index],
            )
            for index, s in enumerate(doc.sections)
        )
    return ExtractionResult(
        metric_name=metric.name,
        doc_id=doc.doc_id,
        pipeline="similarity",
        answer=answer,
        winning_section_id=section.section_id if answer.answerable else None,
        section_scores=scores,
        duration_ms=timer.ms,
    )


def extract_similarity_score(
    doc: PolicyDocument,
    metric: Metric,
    answerer: Answerer,
    vectors: WordVectorTable,
    stopwords: StopwordList | None = None,
    empty_keywords_fallback: bool = True,
) -> ExtractionResult:
    """Combine model score and similarity: highest sum wins."""
    if stopwords is None:
        stopwords = default_stopwords()
    keyword_lemmas = prepare_keywords(metric, stopwords)
    if not keyword_lemmas:
        if not empty_keywords_fallback:
            raise EmptyKeywords(metric.name)
        fallback = extract_score(doc, metric, answerer)
        return replace(fallback, pipeline="similarity_score")
    with _Timer() as timer:
        sims = _section_similarities(doc, keyword_lemmas, vectors, stopwords)
        answers: list[Answer] = []
        scores: list[SectionScore] = []
        for index, section in enumerate(doc.sections):
            raw = answerer(metric.description, section.text)
            answers.append(raw)
            scores.append(
                SectionScore(
                    section_id=section.section_id,
                    model_score=raw.score if raw.answerable else None,
                    similarity=sims[index],
                )
            )
        winner_index: int | None = None
        best_combined = float("-inf")
        for index, raw in enumerate(answers):
            if not raw.answerable:
                continue
            combined = raw.score + sims[index]
            if combined > best_combined:
                best_combined = combined
                winner_index = index
        if winner_index is None:
            answer = _no_answer_aggregate(answers)
            winning_id = None
        else:
            section = doc.sections[winner_index]
            segments = [(0, len(section.text), section.start_offset)]
            answer = _remap_answer(answers[winner_index], segments, doc.full_text)
            winning_id = section.section_id
    return ExtractionResult(
        metric_name=metric.name,
        doc_id=doc.doc_id,
        pipeline="similarity_score",
        answer=answer,
        winning_section_id=winning_id,
        section_scores=tuple(scores),
        duration_ms=timer.ms,
    )


def extract(
    doc: PolicyDocument,
    metric: Metric,
    pipeline: str,
    answerer: Answerer,
    vectors: WordVectorTable | None = None,
    stopwords: StopwordList | None = None,
    empty_keywords_fallback: bool = True,
) -> ExtractionResult:
    """Dispatch to one pipeline by name."""
    if pipeline == "whole_doc":
        return extract_whole_doc(doc, metric, answerer)
    if pipeline == "keyword":
        return extract_keyword(doc, metric, answerer, stopwords)
    if pipeline == "score":
        return extract_score(doc, metric, answerer)
    if pipeline in ("similarity", "similarity_score"):
        if vectors is None:
            raise ValueError(f"pipeline {pipeline!r} needs a word-vector table")
        fn = extract_similarity if pipeline == "similarity" else extract_similarity_score
        return fn(
            doc,
            metric,
            answerer,
            vectors,
            stopwords,
            empty_keywords_fallback=empty_keywords_fallback,
        )
    raise ValueError(f"unknown pipeline {pipeline!r}")


def run_all(
    doc: PolicyDocument,
    metric: Metric,
    answerer: Answerer,
    vectors: WordVectorTable | None = None,
    stopwords: StopwordList | None = None,
    pipelines: tuple[str, ...] = PIPELINES,
    empty_keywords_fallback: bool = True,
) -> tuple[list[ExtractionResult], dict[str, Exception]]:
    """Run the requested pipelines; a failing pipeline never stops the rest.

    Returns the successful results in pipeline order plus a map from
    pipeline name to the exception that stopped it.
    """
    results: list[ExtractionResult] = []
    errors: dict[str, Exception] = {}
    for pipeline in pipelines:
        try:
            results.append(
                extract(
                    doc,
                    metric,
                    pipeline,
                    answerer,
                    vectors,
                    stopwords,
                    empty_keywords_fallback=empty_keywords_fallback,
                )
            )
        except Exception as exc:  # aggregated so siblings still run
            errors[pipeline] = exc
    return results, errors
