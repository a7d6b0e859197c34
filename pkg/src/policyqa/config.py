"""Runtime configuration: one JSON file, overridable by environment.

Environment variables (``POLICYQA_*``) win over the file, the file wins
over defaults. Everything the service and CLI need to vary between
deployments lives here: store directory, listen address, answerer
backend, vector table, stop-word list.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .answerers import AnswererConfig
from .embeddings import WordVectorTable, load_vectors
from .textprep import StopwordList, default_stopwords, load_stopwords

__all__ = ["ServiceConfig", "load_config"]

_ENV_PREFIX = "POLICYQA_"


@dataclass(frozen=True)
class ServiceConfig:
    store_dir: str = "policyqa-store"
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    answerer_backend: str = "lexical"
    endpoint_url: str | None = None
    window_tokens: int = 30
    timeout_ms: int = 30000
    no_answer_threshold: float = 0.2
    vectors_path: str | None = None
    stopwords_path: str | None = None
    ui_dir: str | None = None
    empty_keywords_fallback: bool = True

    def answerer_config(self) -> AnswererConfig:
        return AnswererConfig(
            backend=self.answerer_backend,
            endpoint_url=self.endpoint_url,
            window_tokens=self.window_tokens,
            timeout_ms=self.timeout_ms,
            no_answer_threshold=self.no_answer_threshold,
        )

    def stopword_list(self) -> StopwordList:
        if self.stopwords_path:
            return load_stopwords(self.stopwords_path)
        return default_stopwords()

    def vector_table(self) -> WordVectorTable | None:
        if self.vectors_path:
            return load_vectors(self.vectors_path)
        return None


_INT_FIELDS = {"listen_port", "window_tokens", "timeout_ms"}
_FLOAT_FIELDS = {"no_answer_threshold"}
_BOOL_FIELDS = {"empty_keywords_fallback"}


def _coerce(name: str, value):
    if name in _INT_FIELDS:
        return int(value)
    if name in _FLOAT_FIELDS:
        return float(value)
    if name in _BOOL_FIELDS:
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return bool(value)
    return value


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Defaults, then the JSON file (if any), then the environment."""
    values: dict = {}
    field_names = {f.name for f in fields(ServiceConfig)}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        unknown = set(raw) - field_names
        if unknown:
            raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
        for key, value in raw.items():
            values[key] = _coerce(key, value)
    for name in field_names:
        env_value = os.environ.get(_ENV_PREFIX + name.upper())
        if env_value is not None:
            values[name] = _coerce(name, env_value)
    return ServiceConfig(**values)
