"""Shared helpers for the test suite."""

from __future__ import annotations

from policyqa.answerers import Answer
from policyqa.documents import PolicyDocument, Section

SEP = "\n\n"


def make_doc(
    sections: list[tuple[str, str]], doc_id: str = "doc-test", title: str = ""
) -> PolicyDocument:
    """Build a PolicyDocument directly from (heading, body) pairs."""
    built = []
    parts = []
    position = 0
    for index, (heading, body) in enumerate(sections):
        if parts:
            parts.append(SEP)
            position += len(SEP)
        if heading and body:
            chunk = heading + "\n" + body
        else:
            chunk = heading or body
        built.append(
            Section(
                section_id=f"s{index + 1:04d}",
                heading=heading,
                level=1 if heading else 1,
                body=body,
                start_offset=position,
                end_offset=position + len(chunk),
            )
        )
        parts.append(chunk)
        position += len(chunk)
    return PolicyDocument(
        doc_id=doc_id,
        title=title or (sections[0][0] if sections else ""),
        sections=tuple(built),
        full_text="".join(parts),
    )


class SubstringAnswerer:
    """Answerer stub that extracts one fixed snippet when present."""

    def __init__(self, snippet: str, score: float = 0.9):
        self.snippet = snippet
        self.score = score
        self.calls: list[str] = []

    def __call__(self, question: str, context: str) -> Answer:
        self.calls.append(context)
        position = context.find(self.snippet)
        if position < 0:
            return Answer("", 0, 0, 1.0, False)
        return Answer(
            self.snippet, position, position + len(self.snippet), self.score, True
        )


class ScriptedAnswerer:
    """Answerer stub that scores contexts by which marker they contain.

    ``script`` maps a marker substring to (score, answerable). A context
    matching a marker gets an answer spanning the entire context; an
    unmatched context is unanswerable with confidence 1.0.
    """

    def __init__(self, script: dict[str, tuple[float, bool]]):
        self.script = script
        self.calls: list[str] = []

    def __call__(self, question: str, context: str) -> Answer:
        self.calls.append(context)
        for marker, (score, answerable) in self.script.items():
            if marker in context:
                if not answerable:
                    return Answer("", 0, 0, score, False)
                return Answer(context, 0, len(context), score, True)
        return Answer("", 0, 0, 1.0, False)
