"""Command-line driver: normalize, extract, evaluate, report, serve.

Every command is a thin shell over the library modules. Output on stdout
is deterministic — byte-identical across runs for identical inputs — so
record streams and report tables can be committed as fixtures and
diffed. Exit codes: 0 success, 1 validation problems (unreadable or
malformed inputs, bad flag combinations), 2 backend failures (the remote
QA service erroring, timing out, or returning junk).
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import __version__
from .config import load_config
from .documents import PolicyDocument, normalize_html
from .errors import PolicyQAError, RemoteError, SpanMappingError
from .evaluation import (
    ErrorReport,
    QualityReport,
    error_report,
    load_annotations,
    quality_by_pipeline,
)
from .metrics import load_catalog
from .pipelines import PIPELINES, extract
from .records import EvidenceRecord, build_record
from .answerers import AnswererConfig, get_answerer
from .embeddings import load_vectors
from .textprep import default_stopwords, load_stopwords

_PIPELINE_CHOICES = PIPELINES + ("all",)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (RemoteError, SpanMappingError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (PolicyQAError, ValueError, OSError, json.JSONDecodeError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.version_option(version=__version__, prog_name="policyqa")
def main() -> None:
    """Extract and review audit evidence from policy documents."""


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_document(path: str) -> PolicyDocument:
    return PolicyDocument.from_dict(json.loads(_read_text(path)))


def _load_records(path: str) -> list[EvidenceRecord]:
    records = []
    for line_number, line in enumerate(_read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(EvidenceRecord.from_dict(json.loads(line)))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}:{line_number}: bad record line: {exc}") from exc
    return records


@main.command()
@click.argument("in_html", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@_guarded
def normalize(in_html: str, output: str | None) -> None:
    """Repair converter HTML into a structured document JSON."""
    doc = normalize_html(_read_text(in_html), source_name=Path(in_html).name)
    payload = json.dumps(doc.to_dict(), ensure_ascii=False, indent=2) + "\n"
    if output:
        Path(output).write_text(payload, encoding="utf-8")
    else:
        click.echo(payload, nl=False)


@main.command("extract")
@click.argument("doc_json", type=click.Path(dir_okay=False))
@click.argument("catalog_json", type=click.Path(dir_okay=False))
@click.option(
    "--pipeline",
    "pipeline_name",
    required=True,
    type=click.Choice(_PIPELINE_CHOICES),
)
@click.option("--vectors", "vectors_path", type=click.Path(dir_okay=False), default=None)
@click.option(
    "--answerer",
    "answerer_backend",
    type=click.Choice(["lexical", "remote"]),
    default="lexical",
    show_default=True,
)
@click.option("--endpoint", "endpoint_url", default=None, help="remote answerer URL")
@click.option("--stopwords", "stopwords_path", type=click.Path(dir_okay=False), default=None)
@_guarded
def extract_cmd(
    doc_json: str,
    catalog_json: str,
    pipeline_name: str,
    vectors_path: str | None,
    answerer_backend: str,
    endpoint_url: str | None,
    stopwords_path: str | None,
) -> None:
    """Run extraction pipelines; emits one evidence record per JSON line.

    Records are ordered by metric name, then by pipeline in the canonical
    order, so output is reproducible.
    """
    doc = _load_document(doc_json)
    catalog = load_catalog(Path(catalog_json))
    pipelines = PIPELINES if pipeline_name == "all" else (pipeline_name,)
    needs_vectors = any(p in ("similarity", "similarity_score") for p in pipelines)
    if needs_vectors and not vectors_path:
        raise ValueError(
            "similarity pipelines need --vectors pointing at a word-vector table"
        )
    vectors = load_vectors(vectors_path) if vectors_path else None
    if answerer_backend == "remote" and not endpoint_url:
        raise ValueError("--answerer remote needs --endpoint")
    answerer = get_answerer(
        AnswererConfig(backend=answerer_backend, endpoint_url=endpoint_url)
    )
    stopwords = load_stopwords(stopwords_path) if stopwords_path else default_stopwords()

    for metric in sorted(catalog, key=lambda m: m.name):
        for pipeline in pipelines:
            result = extract(doc, metric, pipeline, answerer, vectors, stopwords)
            record = build_record(result, metric)
            click.echo(
                json.dumps(record.to_dict(deterministic=True), ensure_ascii=False)
            )


def _write_figure(path: Path, labels: list[str], values: list[float], title: str, ylabel: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(labels)), values, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _quality_table(reports: list[QualityReport]) -> str:
    lines = [
        f"{'pipeline':<18}{'correct':>8}{'total':>7}{'score':>7}{'strict_f1':>11}"
    ]
    for report in reports:
        lines.append(
            f"{report.pipeline:<18}{report.correct_count:>8}{report.total_annotated:>7}"
            f"{report.score:>7.2f}{report.strict_f1_mean:>11.2f}"
        )
    return "\n".join(lines)


@main.command()
@click.argument("records_jsonl", type=click.Path(dir_okay=False))
@click.argument("annotations_tsv", type=click.Path(dir_okay=False))
@click.argument("doc_json", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="write the table as TSV here, plus a .png figure alongside")
@_guarded
def evaluate(records_jsonl: str, annotations_tsv: str, doc_json: str, output: str | None) -> None:
    """Score extraction records against annotated ground truth."""
    doc = _load_document(doc_json)
    records = _load_records(records_jsonl)
    annotations = load_annotations(annotations_tsv, doc)
    reports = quality_by_pipeline(records, annotations)
    click.echo(_quality_table(reports))
    if output:
        out = Path(output)
        rows = ["pipeline\tcorrect\ttotal\tscore\tstrict_f1"]
        for report in reports:
            rows.append(
                f"{report.pipeline}\t{report.correct_count}\t{report.total_annotated}"
                f"\t{report.score:.4f}\t{report.strict_f1_mean:.4f}"
            )
        out.write_text("\n".join(rows) + "\n", encoding="utf-8")
        _write_figure(
            out.with_suffix(".png"),
            [r.pipeline for r in reports],
            [r.score for r in reports],
            "Retrieval quality by pipeline",
            "score",
        )


def _error_table(report: ErrorReport) -> str:
    lines = [f"{'category':<20}{'count':>6}{'percent':>9}"]
    for category, count in report.counts.items():
        lines.append(
            f"{category:<20}{count:>6}{report.percentages[category]:>8.2f}%"
        )
    lines.append(f"{'total':<20}{report.total:>6}")
    considered = report.total - report.counts.get("NotInDocument", 0)
    lines.append(
        f"filtered accuracy: {100.0 * report.filtered_accuracy:.2f}% "
        f"({report.counts.get('NoError', 0)}/{considered})"
    )
    return "\n".join(lines)


@main.command()
@click.argument("records_jsonl", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="write the table as TSV here, plus a .png figure alongside")
@_guarded
def report(records_jsonl: str, output: str | None) -> None:
    """Summarize reviewer-assigned error categories over reviewed records."""
    records = [r for r in _load_records(records_jsonl) if r.status != "Pending"]
    if not records:
        raise ValueError(f"{records_jsonl}: no reviewed records to report on")
    summary = error_report(records)
    click.echo(_error_table(summary))
    if output:
        out = Path(output)
        rows = ["category\tcount\tpercent"]
        for category, count in summary.counts.items():
            rows.append(f"{category}\t{count}\t{summary.percentages[category]:.2f}")
        rows.append(f"filtered_accuracy\t\t{100.0 * summary.filtered_accuracy:.2f}")
        out.write_text("\n".join(rows) + "\n", encoding="utf-8")
        _write_figure(
            out.with_suffix(".png"),
            list(summary.counts),
            [summary.counts[c] for c in summary.counts],
            "Reviewer error categories",
            "records",
        )


@main.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@_guarded
def serve(config_path: str | None) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path)
    app = create_app(config)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port)


if __name__ == "__main__":
    main()
