"""Turning extracted answer text into a machine-checkable compliance hint.

An answer like "The password needs to be changed after a maximum time
duration of 60 days." is parsed according to the metric's declared data
type (here Duration -> 60 days), compared against the metric's target
with its operator, and rendered as a short human-readable hint such as
``60 ≤ 100 → True``. Reviewers see the hint next to the evidence; it is
an aid, never an auto-approval.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .answerers import Answer
from .errors import TypeMismatch
from .metrics import Metric
from .textprep import lemmatize, tokenize

__all__ = [
    "AssessmentHint",
    "OUTCOME_COMPLIANT",
    "OUTCOME_NOT_COMPLIANT",
    "OUTCOME_UNDETERMINED",
    "parse_value",
    "compare",
    "assess",
]

OUTCOME_COMPLIANT = "Compliant"
OUTCOME_NOT_COMPLIANT = "NotCompliant"
OUTCOME_UNDETERMINED = "Undetermined"

# first numeric literal in free text; tolerates signs and thousands separators
_NUMBER_RE = re.compile(r"[+-]?\d{1,3}(?:,\d{3})+(?:\.\d+)?|[+-]?\d+(?:\.\d+)?")

_DURATION_UNIT_DAYS = {"day": 1, "week": 7, "month": 30, "year": 365}
# how many tokens after the number may hold its unit ("60 calendar days" works,
# a unit four clauses later does not)
_UNIT_LOOKAHEAD = 3

_BOOLEAN_POSITIVE = {
    "yes", "true", "enable", "enabled", "on", "always",
    "require", "mandatory", "must", "mandate",
}
_BOOLEAN_NEGATIVE = {
    "no", "false", "disable", "disabled", "off", "never", "not",
    "prohibit", "forbid", "forbidden", "disallow", "ban",
}


@dataclass(frozen=True)
class AssessmentHint:
    """Outcome of checking one answer against one metric."""

    metric_name: str
    parsed_value: int | float | bool | str | None
    operator: str
    target_value: int | float | bool | str
    data_type: str
    outcome: str
    rendered: str

    def to_dict(self) -> dict:
        return {
            "metric_name": self.metric_name,
            "parsed_value": self.parsed_value,
            "operator": self.operator,
            "target_value": self.target_value,
            "data_type": self.data_type,
            "outcome": self.outcome,
            "rendered": self.rendered,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AssessmentHint":
        return cls(
            metric_name=data["metric_name"],
            parsed_value=data.get("parsed_value"),
            operator=data["operator"],
            target_value=data["target_value"],
            data_type=data["data_type"],
            outcome=data["outcome"],
            rendered=data["rendered"],
        )


def _first_number(text: str) -> float | None:
    match = _NUMBER_RE.search(text)
    if match is None:
        return None
    return float(match.group().replace(",", ""))


def _parse_duration_days(text: str) -> int | float | None:
    """Number plus a nearby following unit word, normalized to days."""
    match = _NUMBER_RE.search(text)
    if match is None:
        return None
    amount = float(match.group().replace(",", ""))
    following = tokenize(text[match.end() :])
    candidates: list[str] = []
    for token in following:
        # hyphenated compounds such as "90-day" carry the unit as a part
        candidates.extend(p for p in token.surface.split("-") if p)
    for candidate in candidates[:_UNIT_LOOKAHEAD]:
        unit = _DURATION_UNIT_DAYS.get(lemmatize(candidate))
        if unit is not None:
            days = amount * unit
            return int(days) if days.is_integer() else days
    return None  # a number without a unit cannot be a duration


def parse_value(text: str, data_type: str) -> int | float | bool | str | None:
    """Extract a typed value from answer text; ``None`` when absent.

    Integer: the first numeric literal, provided it has no fractional
    part. Float: the first numeric literal. Boolean: the first
    polarity-bearing word (yes/true/enabled... vs no/false/disabled...).
    Duration: the first number with a following day/week/month/year unit,
    normalized to days. String: the trimmed text itself.
    """
    if data_type == "String":
        trimmed = text.strip()
        return trimmed or None
    if data_type == "Integer":
        number = _first_number(text)
        if number is None or not number.is_integer():
            return None
        return int(number)
    if data_type == "Float":
        return _first_number(text)
    if data_type == "Duration":
        return _parse_duration_days(text)
    if data_type == "Boolean":
        for token in tokenize(text):
            word = lemmatize(token.surface)
            if word in _BOOLEAN_POSITIVE:
                return True
            if word in _BOOLEAN_NEGATIVE:
                return False
        return None
    raise TypeMismatch(f"unknown data type {data_type!r}")


def compare(value, operator: str, target, data_type: str) -> bool:
    """Apply one comparison operator; both sides must already be typed."""
    if data_type == "String":
        left = str(value).strip().casefold()
        right = str(target).strip().casefold()
        if operator == "=":
            return left == right
        if operator == "contains":
            return right in left
        raise TypeMismatch(f"operator {operator} undefined for String")
    if data_type == "Boolean":
        if operator == "=":
            return bool(value) is bool(target)
        raise TypeMismatch(f"operator {operator} undefined for Boolean")
    # numeric types: Integer, Float, Duration (already in days)
    left = float(value)
    right = float(target)
    if operator == "<":
        return left < right
    if operator == "≤":
        return left <= right
    if operator == "=":
        return left == right
    if operator == "≥":
        return left >= right
    if operator == ">":
        return left > right
    raise TypeMismatch(f"operator {operator} undefined for {data_type}")


def _render_operand(value) -> str:
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def assess(answer: Answer | str | None, metric: Metric) -> AssessmentHint:
    """Check an answer against a metric and render the reviewer hint.

    Unanswerable or unparseable answers come out ``Undetermined`` — the
    hint then reads ``? ≤ 100 → Undetermined`` — so a reviewer can see at
    a glance that the automation had nothing to offer.
    """
    if answer is None:
        text, answerable = "", False
    elif isinstance(answer, str):
        text, answerable = answer, True
    else:
        text, answerable = answer.text, answer.answerable

    parsed = parse_value(text, metric.data_type) if answerable else None
    target_repr = _render_operand(metric.target_value)
    if parsed is None:
        rendered = f"? {metric.operator} {target_repr} → {OUTCOME_UNDETERMINED}"
        outcome = OUTCOME_UNDETERMINED
    else:
        ok = compare(parsed, metric.operator, metric.target_value, metric.data_type)
        outcome = OUTCOME_COMPLIANT if ok else OUTCOME_NOT_COMPLIANT
        rendered = (
            f"{_render_operand(parsed)} {metric.operator} {target_repr} → {ok}"
        )
    return AssessmentHint(
        metric_name=metric.name,
        parsed_value=parsed,
        operator=metric.operator,
        target_value=metric.target_value,
        data_type=metric.data_type,
        outcome=outcome,
        rendered=rendered,
    )
