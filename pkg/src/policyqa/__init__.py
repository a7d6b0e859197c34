"""Evidence extraction and review for cloud security policy documents.

The package turns converter-damaged policy HTML into structured
documents, runs metric-driven extractive question answering over them
through five retrieval pipelines, assesses the answers against metric
targets, and manages the human review workflow over HTTP.
"""

from .answerers import (
    Answer,
    AnswererConfig,
    LexicalBaselineAnswerer,
    RemoteAnswerer,
    get_answerer,
    lexical_baseline_answer,
    remote_answer,
)
from .assessment import AssessmentHint, assess, compare, parse_value
from .config import ServiceConfig, load_config
from .documents import (
    NormalizationOptions,
    PolicyDocument,
    Section,
    document_to_html,
    normalize_html,
    render_highlighted,
    sections_matching,
)
from .embeddings import WordVectorTable, cosine, load_vectors, sentence_vector
from .evaluation import (
    AnnotatedSpan,
    AnnotationSet,
    ErrorReport,
    QualityReport,
    error_report,
    is_correct,
    load_annotations,
    quality_by_pipeline,
    quality_score,
    strict_token_f1,
)
from .metrics import (
    Metric,
    MetricCatalog,
    load_catalog,
    prepare_keywords,
    save_catalog,
)
from .pipelines import (
    PIPELINES,
    ExtractionResult,
    SectionScore,
    extract,
    extract_keyword,
    extract_score,
    extract_similarity,
    extract_similarity_score,
    extract_whole_doc,
    run_all,
)
from .records import EvidenceRecord, build_record, record_id_for
from .store import Store
from .textprep import (
    StopwordList,
    Token,
    content_lemmas,
    default_stopwords,
    lemmatize,
    load_stopwords,
    prepare_text,
    remove_stopwords,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # documents
    "NormalizationOptions",
    "PolicyDocument",
    "Section",
    "normalize_html",
    "document_to_html",
    "render_highlighted",
    "sections_matching",
    # text preparation
    "Token",
    "StopwordList",
    "tokenize",
    "lemmatize",
    "remove_stopwords",
    "prepare_text",
    "content_lemmas",
    "load_stopwords",
    "default_stopwords",
    # metrics
    "Metric",
    "MetricCatalog",
    "load_catalog",
    "save_catalog",
    "prepare_keywords",
    # embeddings
    "WordVectorTable",
    "load_vectors",
    "sentence_vector",
    "cosine",
    # answering
    "Answer",
    "AnswererConfig",
    "LexicalBaselineAnswerer",
    "RemoteAnswerer",
    "lexical_baseline_answer",
    "remote_answer",
    "get_answerer",
    # pipelines
    "PIPELINES",
    "SectionScore",
    "ExtractionResult",
    "extract",
    "extract_whole_doc",
    "extract_keyword",
    "extract_score",
    "extract_similarity",
    "extract_similarity_score",
    "run_all",
    # assessment
    "AssessmentHint",
    "parse_value",
    "compare",
    "assess",
    # evaluation
    "AnnotatedSpan",
    "AnnotationSet",
    "QualityReport",
    "ErrorReport",
    "load_annotations",
    "is_correct",
    "strict_token_f1",
    "quality_score",
    "quality_by_pipeline",
    "error_report",
    # records, store, config
    "EvidenceRecord",
    "build_record",
    "record_id_for",
    "Store",
    "ServiceConfig",
    "load_config",
]
