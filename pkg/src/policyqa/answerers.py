"""Question answering over extracted context text.

Two interchangeable backends produce :class:`Answer` values:

* a deterministic lexical baseline that needs no model server and exists
  so the whole system can run (and be tested) offline, and
* a thin client for a remote extractive-QA service speaking a small JSON
  contract (``POST {"question", "context"}`` returning ``{"answer",
  "score", "start", "end", "answerable"}``).

Both uphold the same invariant: when an answer is given, its offsets
address the context exactly (``context[start:end] == text``).
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Callable

import requests

from .errors import (
    RemoteMalformedResponse,
    RemoteTimeout,
    RemoteUnavailable,
)
from .textprep import StopwordList, content_lemmas, default_stopwords, prepare_text

__all__ = [
    "Answer",
    "AnswererConfig",
    "Answerer",
    "lexical_baseline_answer",
    "remote_answer",
    "LexicalBaselineAnswerer",
    "RemoteAnswerer",
    "get_answerer",
]

Answerer = Callable[[str, str], "Answer"]

# At most this many requests may be in flight against the remote QA service.
_MAX_IN_FLIGHT = 4
_remote_slots = threading.Semaphore(_MAX_IN_FLIGHT)

_SENTENCE_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s|$)|\n")


@dataclass(frozen=True)
class Answer:
    """An extractive answer addressed into its context string."""

    text: str
    start_offset: int
    end_offset: int
    score: float
    answerable: bool

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must be in [0, 1], got {self.score}")
        if self.start_offset < 0 or self.end_offset < self.start_offset:
            raise ValueError(
                f"bad answer span [{self.start_offset}, {self.end_offset})"
            )
        if self.answerable:
            if len(self.text) != self.end_offset - self.start_offset:
                raise ValueError("answer text length disagrees with its span")
        elif self.text or (self.start_offset, self.end_offset) != (0, 0):
            raise ValueError("a no-answer carries empty text and a zero span")

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "start_offset": self.start_offset,
            "end_offset": self.end_offset,
            "score": self.score,
            "answerable": self.answerable,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Answer":
        return cls(
            text=data["text"],
            start_offset=int(data["start_offset"]),
            end_offset=int(data["end_offset"]),
            score=float(data["score"]),
            answerable=bool(data["answerable"]),
        )


@dataclass(frozen=True)
class AnswererConfig:
    backend: str = "lexical"
    endpoint_url: str | None = None
    window_tokens: int = 30
    timeout_ms: int = 30000
    no_answer_threshold: float = 0.2

    def __post_init__(self) -> None:
        if self.backend not in ("lexical", "remote"):
            raise ValueError(f"unknown answerer backend {self.backend!r}")
        if self.backend == "remote" and not self.endpoint_url:
            raise ValueError("remote backend needs endpoint_url")
        if self.window_tokens < 5:
            raise ValueError("window_tokens must be at least 5")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if not 0.0 <= self.no_answer_threshold <= 1.0:
            raise ValueError("no_answer_threshold must lie in [0, 1]")


def _no_answer(confidence: float) -> Answer:
    return Answer(text="", start_offset=0, end_offset=0, score=confidence, answerable=False)


def _sentence_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of sentences: split after ./!/? runs and at newlines."""
    spans: list[tuple[int, int]] = []
    start = 0
    for match in _SENTENCE_BOUNDARY_RE.finditer(text):
        end = match.end()
        if end > start:
            spans.append((start, end))
        start = end
    if start < len(text):
        spans.append((start, len(text)))
    trimmed = []
    for span_start, span_end in spans:
        segment = text[span_start:span_end]
        left = len(segment) - len(segment.lstrip())
        right = len(segment) - len(segment.rstrip())
        if span_start + left < span_end - right:
            trimmed.append((span_start + left, span_end - right))
    return trimmed


def lexical_baseline_answer(
    question: str,
    context: str,
    config: AnswererConfig | None = None,
    stopwords: StopwordList | None = None,
) -> Answer:
    """Deterministic overlap-based extractive answering.

    The context is scanned in half-overlapping windows of
    ``config.window_tokens`` tokens; a window scores the fraction of the
    question's distinct content terms it covers. If the best window stays
    under ``no_answer_threshold`` the question is declared unanswerable
    with confidence ``1 - best``. Otherwise the answer is the full
    sentence overlapping the best window that matches the most question
    terms (ties: the sentence with more content terms, then the earliest).
    """
    if config is None:
        config = AnswererConfig()
    if stopwords is None:
        stopwords = default_stopwords()

    question_terms = set(content_lemmas(question, stopwords))
    if not question_terms:
        return _no_answer(1.0)
    tokens = prepare_text(context, stopwords)
    if not tokens:
        return _no_answer(1.0)

    window = config.window_tokens
    stride = max(1, window // 2)
    best_score = -1.0
    best_range: tuple[int, int] = (0, 0)  # character range of best window
    start_index = 0
    while True:
        window_tokens = tokens[start_index : start_index + window]
        window_lemmas = {t.lemma or t.surface.lower() for t in window_tokens}
        score = len(question_terms & window_lemmas) / len(question_terms)
        if score > best_score:
            best_score = score
            best_range = (window_tokens[0].start_offset, window_tokens[-1].end_offset)
        if start_index + window >= len(tokens):
            break
        start_index += stride

    if best_score < config.no_answer_threshold:
        return _no_answer(1.0 - best_score)

    # choose the best full sentence touching the winning window
    window_start, window_end = best_range
    best_sentence: tuple[int, int] | None = None
    best_key: tuple[int, int] | None = None
    for span_start, span_end in _sentence_spans(context):
        if span_end <= window_start or span_start >= window_end:
            continue
        sentence_tokens = [
            t for t in tokens if span_start <= t.start_offset and t.end_offset <= span_end
        ]
        lemmas = {t.lemma or t.surface.lower() for t in sentence_tokens}
        matched = len(question_terms & lemmas)
        if matched == 0:
            continue
        content = sum(1 for t in sentence_tokens if not t.is_stopword)
        key = (matched, content)  # later spans only win strictly
        if best_key is None or key > best_key:
            best_key = key
            best_sentence = (span_start, span_end)

    if best_sentence is None:
        return _no_answer(1.0 - best_score)
    sentence_start, sentence_end = best_sentence
    return Answer(
        text=context[sentence_start:sentence_end],
        start_offset=sentence_start,
        end_offset=sentence_end,
        score=best_score,
        answerable=True,
    )


def remote_answer(question: str, context: str, config: AnswererConfig) -> Answer:
    """Ask the remote QA service and validate everything it returns."""
    if not config.endpoint_url:
        raise ValueError("remote_answer needs a configured endpoint_url")
    payload = {"question": question, "context": context}
    with _remote_slots:
        try:
            response = requests.post(
                config.endpoint_url, json=payload, timeout=config.timeout_ms / 1000.0
            )
        except requests.exceptions.Timeout as exc:
            raise RemoteTimeout(f"no reply within {config.timeout_ms} ms") from exc
        except requests.exceptions.RequestException as exc:
            raise RemoteUnavailable(str(exc)) from exc
    if response.status_code != 200:
        raise RemoteUnavailable(f"QA service returned HTTP {response.status_code}")
    try:
        body = response.json()
    except ValueError as exc:
        raise RemoteMalformedResponse("response body is not JSON") from exc
    try:
        answer = Answer(
            text=str(body["answer"]),
            start_offset=int(body["start"]),
            end_offset=int(body["end"]),
            score=float(body["score"]),
            answerable=bool(body["answerable"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise RemoteMalformedResponse(f"response missing or mistyped field: {exc}") from exc
    if not 0.0 <= answer.score <= 1.0:
        raise RemoteMalformedResponse(f"score {answer.score} outside [0, 1]")
    if answer.answerable:
        if not 0 <= answer.start_offset <= answer.end_offset <= len(context):
            raise RemoteMalformedResponse(
                f"answer offsets [{answer.start_offset}, {answer.end_offset}) "
                "fall outside the context"
            )
        if context[answer.start_offset : answer.end_offset] != answer.text:
            raise RemoteMalformedResponse("answer text does not match its offsets")
    return answer


class LexicalBaselineAnswerer:
    """Callable wrapper so pipelines can hold a configured answerer."""

    def __init__(
        self, config: AnswererConfig | None = None, stopwords: StopwordList | None = None
    ) -> None:
        self.config = config or AnswererConfig()
        self._stopwords = stopwords

    def __call__(self, question: str, context: str) -> Answer:
        return lexical_baseline_answer(question, context, self.config, self._stopwords)


class RemoteAnswerer:
    def __init__(self, config: AnswererConfig) -> None:
        if config.backend != "remote":
            raise ValueError("RemoteAnswerer needs a remote backend config")
        self.config = config

    def __call__(self, question: str, context: str) -> Answer:
        return remote_answer(question, context, self.config)


def get_answerer(config: AnswererConfig) -> Answerer:
    if config.backend == "remote":
        return RemoteAnswerer(config)
    return LexicalBaselineAnswerer(config)
