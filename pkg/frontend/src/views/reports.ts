/**
 * Reports view: retrieval quality per pipeline and the distribution of
 * reviewer-assigned error categories for one document.
 *
 * All numbers come from the service's report endpoints; this view only
 * formats them (two decimal places, the same shape the audit write-ups
 * use). The quality table needs a server-side annotations file, so it
 * loads on demand; the error table loads as soon as a document is picked.
 */

import type { ServiceApi } from '../api.js';
import type { ErrorReportView, QualityRow } from '../types.js';
import { ERROR_CATEGORIES } from '../types.js';
import { escapeHtml, formatFraction, formatPercentValue, formatScore } from '../format.js';

export interface ReportsContext {
  api: ServiceApi;
}

export function errorTableHtml(report: ErrorReportView): string {
  const rows = ERROR_CATEGORIES.map(
    (category) => `
      <tr>
        <td>${category}</td>
        <td>${report.counts[category]}</td>
        <td>${formatPercentValue(report.percentages[category])}</td>
      </tr>`,
  ).join('');
  const considered = report.total - report.counts.NotInDocument;
  return `
    <table class="report-table" data-error-table>
      <thead><tr><th>Error category</th><th>Count</th><th>Percent</th></tr></thead>
      <tbody>${rows}</tbody>
      <tfoot><tr><td>Total</td><td>${report.total}</td><td></td></tr></tfoot>
    </table>
    <p class="filtered-accuracy" data-filtered-accuracy>
      Accuracy over evidence present in the document:
      ${formatFraction(report.filtered_accuracy)} (${report.counts.NoError}/${considered})
    </p>`;
}

export function qualityTableHtml(rows: QualityRow[]): string {
  if (rows.length === 0) {
    return '<p class="empty" data-quality-table>No annotated records for this document.</p>';
  }
  const body = rows
    .map(
      (row) => `
      <tr>
        <td><code>${escapeHtml(row.pipeline)}</code></td>
        <td>${row.correct_count}</td>
        <td>${row.total_annotated}</td>
        <td>${formatScore(row.score)}</td>
        <td>${formatScore(row.strict_f1_mean)}</td>
      </tr>`,
    )
    .join('');
  return `
    <table class="report-table" data-quality-table>
      <thead>
        <tr><th>Pipeline</th><th>Correct</th><th>Annotated</th><th>Score</th><th>Strict F1</th></tr>
      </thead>
      <tbody>${body}</tbody>
    </table>`;
}

export async function renderReports(container: HTMLElement, ctx: ReportsContext): Promise<void> {
  container.innerHTML = '<p class="loading">Loading documents…</p>';

  let documents;
  try {
    documents = await ctx.api.listDocuments();
  } catch (error) {
    container.innerHTML = `<p class="error-banner">Could not load documents: ${escapeHtml(
      error instanceof Error ? error.message : String(error),
    )}</p>`;
    return;
  }

  const docOptions = documents
    .map((doc) => {
      const label = doc.title || doc.source_name || doc.doc_id;
      return `<option value="${escapeHtml(doc.doc_id)}">${escapeHtml(label)}</option>`;
    })
    .join('');

  container.innerHTML = `
    <div class="toolbar">
      <label>Document
        <select data-report-doc>
          <option value="">choose a document</option>
          ${docOptions}
        </select>
      </label>
    </div>
    <section>
      <h3>Reviewer error categories</h3>
      <div data-error-report><p class="empty">Pick a document.</p></div>
    </section>
    <section>
      <h3>Retrieval quality</h3>
      <div class="toolbar">
        <label>Annotations file (on the server)
          <input type="text" data-annotations-ref placeholder="annotations.tsv" />
        </label>
        <button type="button" data-load-quality>Load</button>
      </div>
      <div data-quality-report></div>
    </section>`;

  const docSelect = container.querySelector<HTMLSelectElement>('[data-report-doc]')!;
  const errorHost = container.querySelector<HTMLElement>('[data-error-report]')!;
  const qualityHost = container.querySelector<HTMLElement>('[data-quality-report]')!;

  const loadErrors = async () => {
    if (!docSelect.value) return;
    errorHost.innerHTML = '<p class="loading">Loading…</p>';
    try {
      const report = await ctx.api.errorReport(docSelect.value);
      errorHost.innerHTML =
        report.total === 0
          ? '<p class="empty" data-error-table>Nothing reviewed yet for this document.</p>'
          : errorTableHtml(report);
    } catch (error) {
      errorHost.innerHTML = `<p class="error-banner">${escapeHtml(
        error instanceof Error ? error.message : String(error),
      )}</p>`;
    }
  };

  const loadQuality = async () => {
    const ref = container.querySelector<HTMLInputElement>('[data-annotations-ref]')!.value.trim();
    if (!docSelect.value || !ref) return;
    qualityHost.innerHTML = '<p class="loading">Loading…</p>';
    try {
      const rows = await ctx.api.qualityReport(docSelect.value, ref);
      qualityHost.innerHTML = qualityTableHtml(rows);
    } catch (error) {
      qualityHost.innerHTML = `<p class="error-banner">${escapeHtml(
        error instanceof Error ? error.message : String(error),
      )}</p>`;
    }
  };

  docSelect.addEventListener('change', () => void loadErrors());
  container
    .querySelector<HTMLButtonElement>('[data-load-quality]')!
    .addEventListener('click', () => void loadQuality());
}
