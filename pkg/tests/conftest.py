from __future__ import annotations

from pathlib import Path

import pytest

from policyqa.documents import PolicyDocument, normalize_html
from policyqa.embeddings import WordVectorTable, load_vectors
from policyqa.metrics import Metric, MetricCatalog, load_catalog

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def html_dir() -> Path:
    return FIXTURES / "html"


@pytest.fixture(scope="session")
def password_policy_html(html_dir: Path) -> str:
    return (html_dir / "password_policy.html").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def password_doc(password_policy_html: str) -> PolicyDocument:
    return normalize_html(password_policy_html)


@pytest.fixture(scope="session")
def catalog() -> MetricCatalog:
    return load_catalog(FIXTURES / "catalog.json")


@pytest.fixture(scope="session")
def password_metric(catalog: MetricCatalog) -> Metric:
    return catalog.get("PasswordPolicyQ2")


@pytest.fixture(scope="session")
def topic_vectors() -> WordVectorTable:
    return load_vectors(FIXTURES / "vectors_topic.txt")


@pytest.fixture(scope="session")
def vectors_path() -> Path:
    return FIXTURES / "vectors_topic.txt"


@pytest.fixture(scope="session")
def catalog_path() -> Path:
    return FIXTURES / "catalog.json"
