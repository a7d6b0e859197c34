/**
 * Record list view: the reviewer's worklist.
 *
 * Document and status filters are pushed down to the service; the outcome
 * filter and paging are applied client-side over the returned list. Every
 * control change refetches, so what is on screen is always what the
 * service last said.
 */

import type { ServiceApi } from '../api.js';
import type { EvidenceRecordView } from '../types.js';
import { escapeHtml, truncate } from '../format.js';

export interface RecordListState {
  docId: string;
  status: string;
  outcome: string;
  page: number;
}

export interface RecordListContext {
  api: ServiceApi;
  navigate: (hash: string) => void;
}

export const PAGE_SIZE = 20;

const STATUS_OPTIONS = ['', 'Pending', 'Approved', 'Rejected'];
const OUTCOME_OPTIONS = ['', 'Compliant', 'NonCompliant', 'Undetermined'];

function selectOptions(options: string[], selected: string, anyLabel: string): string {
  return options
    .map((value) => {
      const label = value === '' ? anyLabel : value;
      const attr = value === selected ? ' selected' : '';
      return `<option value="${escapeHtml(value)}"${attr}>${escapeHtml(label)}</option>`;
    })
    .join('');
}

function statusChip(status: string): string {
  return `<span class="chip chip-${status.toLowerCase()}" data-status>${escapeHtml(status)}</span>`;
}

function outcomeChip(outcome: string): string {
  return `<span class="chip chip-outcome-${outcome.toLowerCase()}">${escapeHtml(outcome)}</span>`;
}

function recordRow(record: EvidenceRecordView, question: string): string {
  const answer = record.answer.answerable ? truncate(record.answer.text) : '(no answer)';
  return `
    <tr data-record-id="${escapeHtml(record.record_id)}">
      <td>
        <div class="metric-name">${escapeHtml(record.metric_name)}</div>
        <div class="metric-question">${escapeHtml(question)}</div>
      </td>
      <td><code>${escapeHtml(record.pipeline)}</code></td>
      <td class="answer-cell">${escapeHtml(answer)}</td>
      <td>${outcomeChip(record.assessment.outcome)}</td>
      <td>${statusChip(record.status)}</td>
    </tr>`;
}

export async function renderRecordList(
  container: HTMLElement,
  ctx: RecordListContext,
  state: RecordListState = { docId: '', status: '', outcome: '', page: 0 },
): Promise<void> {
  container.innerHTML = '<p class="loading">Loading records…</p>';

  let documents;
  let metrics;
  let records: EvidenceRecordView[];
  try {
    [documents, metrics, records] = await Promise.all([
      ctx.api.listDocuments(),
      ctx.api.listMetrics(),
      ctx.api.listRecords({ docId: state.docId || undefined, status: state.status || undefined }),
    ]);
  } catch (error) {
    container.innerHTML = `<p class="error-banner">Could not load records: ${escapeHtml(
      error instanceof Error ? error.message : String(error),
    )}</p>`;
    return;
  }

  const questionByMetric = new Map(metrics.map((m) => [m.name, m.description]));
  const filtered = state.outcome
    ? records.filter((r) => r.assessment.outcome === state.outcome)
    : records;

  const pageCount = Math.max(1, Math.ceil(filtered.length / PAGE_SIZE));
  const page = Math.min(state.page, pageCount - 1);
  const visible = filtered.slice(page * PAGE_SIZE, (page + 1) * PAGE_SIZE);

  const docOptions = documents
    .map((doc) => {
      const attr = doc.doc_id === state.docId ? ' selected' : '';
      const label = doc.title || doc.source_name || doc.doc_id;
      return `<option value="${escapeHtml(doc.doc_id)}"${attr}>${escapeHtml(label)}</option>`;
    })
    .join('');

  container.innerHTML = `
    <div class="toolbar">
      <label>Document
        <select data-filter="doc">
          <option value="">all documents</option>
          ${docOptions}
        </select>
      </label>
      <label>Status
        <select data-filter="status">${selectOptions(STATUS_OPTIONS, state.status, 'any status')}</select>
      </label>
      <label>Outcome
        <select data-filter="outcome">${selectOptions(OUTCOME_OPTIONS, state.outcome, 'any outcome')}</select>
      </label>
      <span class="record-count">${filtered.length} record${filtered.length === 1 ? '' : 's'}</span>
    </div>
    <table class="record-table">
      <thead>
        <tr><th>Metric</th><th>Pipeline</th><th>Answer</th><th>Outcome</th><th>Status</th></tr>
      </thead>
      <tbody>
        ${visible.map((r) => recordRow(r, questionByMetric.get(r.metric_name) ?? '')).join('')}
      </tbody>
    </table>
    <div class="pager">
      <button data-page="prev" ${page === 0 ? 'disabled' : ''}>&larr; previous</button>
      <span>page ${page + 1} of ${pageCount}</span>
      <button data-page="next" ${page >= pageCount - 1 ? 'disabled' : ''}>next &rarr;</button>
    </div>`;

  const rerender = (next: Partial<RecordListState>) =>
    renderRecordList(container, ctx, { ...state, page: 0, ...next });

  container.querySelector<HTMLSelectElement>('[data-filter="doc"]')!.addEventListener(
    'change',
    (event) => rerender({ docId: (event.target as HTMLSelectElement).value }),
  );
  container.querySelector<HTMLSelectElement>('[data-filter="status"]')!.addEventListener(
    'change',
    (event) => rerender({ status: (event.target as HTMLSelectElement).value }),
  );
  container.querySelector<HTMLSelectElement>('[data-filter="outcome"]')!.addEventListener(
    'change',
    (event) => rerender({ outcome: (event.target as HTMLSelectElement).value }),
  );
  container.querySelector<HTMLButtonElement>('[data-page="prev"]')!.addEventListener('click', () =>
    renderRecordList(container, ctx, { ...state, page: page - 1 }),
  );
  container.querySelector<HTMLButtonElement>('[data-page="next"]')!.addEventListener('click', () =>
    renderRecordList(container, ctx, { ...state, page: page + 1 }),
  );
  for (const row of container.querySelectorAll<HTMLTableRowElement>('tbody tr[data-record-id]')) {
    row.addEventListener('click', () => {
      ctx.navigate(`#/records/${encodeURIComponent(row.dataset.recordId!)}`);
    });
  }
}
