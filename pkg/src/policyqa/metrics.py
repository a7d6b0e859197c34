"""Metric catalog: the questions a policy document is audited against.

A metric bundles a natural-language question with the machine-readable
check applied to its answer (comparison operator, target value, expected
data type) plus retrieval keywords. Catalogs are stored as JSON lists and
validated strictly on load so that bad authoring fails fast rather than
surfacing later as silently-wrong assessments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CatalogParseError, DuplicateMetricName, TypeMismatch
from .textprep import StopwordList, content_lemmas, default_stopwords

__all__ = [
    "Metric",
    "MetricCatalog",
    "OPERATORS",
    "DATA_TYPES",
    "load_catalog",
    "save_catalog",
    "prepare_keywords",
]

# ASCII digraphs are accepted on input and canonicalized to one form.
_OPERATOR_ALIASES = {"<=": "≤", ">=": "≥", "==": "="}
OPERATORS = frozenset({"<", "≤", "=", "≥", ">", "contains"})
DATA_TYPES = frozenset({"Integer", "Float", "Boolean", "String", "Duration"})

_ORDERING_OPERATORS = frozenset({"<", "≤", "≥", ">"})


def _check_target(data_type: str, operator: str, target) -> None:
    if data_type == "Integer":
        ok = isinstance(target, int) and not isinstance(target, bool)
    elif data_type == "Float":
        ok = isinstance(target, (int, float)) and not isinstance(target, bool)
    elif data_type == "Boolean":
        ok = isinstance(target, bool)
    elif data_type == "String":
        ok = isinstance(target, str)
    elif data_type == "Duration":
        # duration targets are stored already normalized, as a number of days
        ok = isinstance(target, (int, float)) and not isinstance(target, bool)
    else:
        raise TypeMismatch(f"unknown data type {data_type!r}")
    if not ok:
        raise TypeMismatch(
            f"target value {target!r} does not fit data type {data_type}"
        )
    if operator in _ORDERING_OPERATORS and data_type in ("Boolean", "String"):
        raise TypeMismatch(
            f"operator {operator} needs an ordered data type, got {data_type}"
        )
    if operator == "contains" and data_type != "String":
        raise TypeMismatch("operator 'contains' only applies to String metrics")


@dataclass(frozen=True)
class Metric:
    """One auditable question with its automated compliance check."""

    name: str
    description: str
    keywords: tuple[str, ...]
    operator: str
    target_value: int | float | bool | str
    data_type: str
    requirement_id: str = ""

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise ValueError("metric name must be non-empty")
        if not self.description or not self.description.strip():
            raise ValueError(f"metric {self.name!r} needs a description")
        object.__setattr__(self, "keywords", tuple(self.keywords))
        operator = _OPERATOR_ALIASES.get(self.operator, self.operator)
        if operator not in OPERATORS:
            raise ValueError(f"metric {self.name!r} has unknown operator {self.operator!r}")
        object.__setattr__(self, "operator", operator)
        if self.data_type not in DATA_TYPES:
            raise TypeMismatch(f"metric {self.name!r} has unknown data type {self.data_type!r}")
        _check_target(self.data_type, operator, self.target_value)

    def to_dict(self) -> dict:
        data = {
            "name": self.name,
            "description": self.description,
            "keywords": list(self.keywords),
            "operator": self.operator,
            "target_value": self.target_value,
            "data_type": self.data_type,
        }
        if self.requirement_id:
            data["requirement_id"] = self.requirement_id
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Metric":
        try:
            return cls(
                name=data["name"],
                description=data["description"],
                keywords=tuple(data.get("keywords", ())),
                operator=data["operator"],
                target_value=data["target_value"],
                data_type=data["data_type"],
                requirement_id=data.get("requirement_id", ""),
            )
        except KeyError as exc:
            raise CatalogParseError(f"metric entry missing field {exc}") from exc


@dataclass(frozen=True)
class MetricCatalog:
    """Ordered collection of metrics with unique names."""

    metrics: tuple[Metric, ...]
    _by_name: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_name: dict[str, Metric] = {}
        for metric in self.metrics:
            if metric.name in by_name:
                raise DuplicateMetricName(metric.name)
            by_name[metric.name] = metric
        object.__setattr__(self, "_by_name", by_name)

    def __iter__(self):
        return iter(self.metrics)

    def __len__(self) -> int:
        return len(self.metrics)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def get(self, name: str) -> Metric:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no metric named {name!r}") from None

    def names(self) -> list[str]:
        return [m.name for m in self.metrics]


def load_catalog(source: str | Path) -> MetricCatalog:
    """Read a catalog from a JSON file (or a JSON string)."""
    if isinstance(source, Path) or (
        isinstance(source, str) and not source.lstrip().startswith("[")
    ):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise CatalogParseError(f"cannot read catalog: {exc}") from exc
    else:
        text = source
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogParseError(f"catalog is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise CatalogParseError("catalog must be a JSON list of metric objects")
    metrics = []
    for index, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise CatalogParseError(f"catalog entry {index} is not an object")
        try:
            metrics.append(Metric.from_dict(entry))
        except (ValueError, TypeMismatch, CatalogParseError) as exc:
            raise CatalogParseError(f"catalog entry {index}: {exc}") from exc
    return MetricCatalog(metrics=tuple(metrics))


def save_catalog(catalog: MetricCatalog, path: str | Path) -> None:
    payload = [metric.to_dict() for metric in catalog.metrics]
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def prepare_keywords(
    metric: Metric, stopwords: StopwordList | None = None
) -> list[str]:
    """Lemmatized, stopword-free, order-preserving unique keyword terms.

    Multi-word keywords contribute each of their content terms.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    seen: set[str] = set()
    prepared: list[str] = []
    for keyword in metric.keywords:
        for lemma in content_lemmas(keyword, stopwords):
            if lemma not in seen:
                seen.add(lemma)
                prepared.append(lemma)
    return prepared
