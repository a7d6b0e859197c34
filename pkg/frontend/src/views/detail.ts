/**
 * Record detail view: the screen a reviewer actually works in.
 *
 * Shows the metric's question, the extracted answer with its stored
 * assessment hint (verbatim — the client never recomputes it), the
 * document context with the evidence span highlighted by the service,
 * per-section scores when the pipeline ranked sections, and the
 * approve/reject form.
 *
 * Reviews are optimistic: the status chip flips immediately, then the
 * service response replaces it. A 409 means someone else reviewed first;
 * the view rolls back to whatever the service now holds and says so.
 */

import type { ServiceApi } from '../api.js';
import { ConflictError } from '../api.js';
import type { ErrorCategory, EvidenceRecordView, ReviewDecision } from '../types.js';
import { ERROR_CATEGORIES } from '../types.js';
import { escapeHtml, formatScore } from '../format.js';

export interface RecordDetailContext {
  api: ServiceApi;
  navigate: (hash: string) => void;
}

function statusChip(status: string): string {
  return `<span class="chip chip-${status.toLowerCase()}" data-status>${escapeHtml(status)}</span>`;
}

function sectionScoreTable(record: EvidenceRecordView): string {
  const scores = record.section_scores ?? [];
  if (scores.length === 0) return '';
  const rows = scores
    .map((s) => {
      const winner = s.section_id === record.winning_section_id ? ' class="winning-section"' : '';
      return `<tr${winner}>
        <td><code>${escapeHtml(s.section_id)}</code></td>
        <td>${formatScore(s.model_score)}</td>
        <td>${formatScore(s.similarity)}</td>
      </tr>`;
    })
    .join('');
  return `
    <h3>Section ranking</h3>
    <table class="score-table" data-section-scores>
      <thead><tr><th>Section</th><th>Model score</th><th>Similarity</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

function reviewForm(record: EvidenceRecordView): string {
  if (record.status !== 'Pending') {
    const category = record.reviewer_category ? ` — ${escapeHtml(record.reviewer_category)}` : '';
    const comment = record.reviewer_comment
      ? `<p class="review-comment">${escapeHtml(record.reviewer_comment)}</p>`
      : '';
    return `<div class="review-done" data-review-done>Reviewed${category}${comment}</div>`;
  }
  const options = ERROR_CATEGORIES.map(
    (category) => `<option value="${category}">${category}</option>`,
  ).join('');
  return `
    <form class="review-form" data-review-form>
      <label>Error category
        <select name="category" data-category>${options}</select>
      </label>
      <label>Comment
        <textarea name="comment" data-comment rows="2" placeholder="optional"></textarea>
      </label>
      <div class="review-actions">
        <button type="button" class="approve" data-decision="approve">Approve</button>
        <button type="button" class="reject" data-decision="reject">Reject</button>
      </div>
    </form>`;
}

export async function renderRecordDetail(
  container: HTMLElement,
  recordId: string,
  ctx: RecordDetailContext,
): Promise<void> {
  container.innerHTML = '<p class="loading">Loading record…</p>';

  let record: EvidenceRecordView;
  let contextHtml: string;
  let question = '';
  try {
    [record, contextHtml] = await Promise.all([
      ctx.api.getRecord(recordId),
      ctx.api.getRecordContext(recordId),
    ]);
    const metrics = await ctx.api.listMetrics();
    question = metrics.find((m) => m.name === record.metric_name)?.description ?? '';
  } catch (error) {
    container.innerHTML = `<p class="error-banner">Could not load record: ${escapeHtml(
      error instanceof Error ? error.message : String(error),
    )}</p>`;
    return;
  }

  const render = (current: EvidenceRecordView, notice = '') => {
    const answer = current.answer.answerable
      ? `<blockquote class="answer-text" data-answer>${escapeHtml(current.answer.text)}</blockquote>
         <p class="answer-meta">offsets ${current.answer.start_offset}–${current.answer.end_offset},
           score ${formatScore(current.answer.score)}</p>`
      : '<p class="answer-meta" data-answer>The pipeline found no answer in this document.</p>';

    container.innerHTML = `
      <p><a href="#/records" data-back>&larr; all records</a></p>
      ${notice ? `<p class="error-banner" data-notice>${escapeHtml(notice)}</p>` : ''}
      <header class="record-header">
        <h2>${escapeHtml(current.metric_name)}</h2>
        <p class="metric-question">${escapeHtml(question)}</p>
        <div class="chips">
          ${statusChip(current.status)}
          <span class="chip chip-outcome-${current.assessment.outcome.toLowerCase()}">
            ${escapeHtml(current.assessment.outcome)}</span>
          <code>${escapeHtml(current.pipeline)}</code>
        </div>
      </header>
      <section>
        <h3>Extracted evidence</h3>
        ${answer}
        <p class="assessment-hint" data-hint>${escapeHtml(current.assessment.rendered)}</p>
      </section>
      ${sectionScoreTable(current)}
      <section>
        <h3>Review</h3>
        ${reviewForm(current)}
      </section>
      <section>
        <h3>Document context</h3>
        <div class="document-context" data-context></div>
      </section>`;

    // The context HTML is the service's own rendering of the stored
    // document with the evidence span already wrapped in <mark>; it is
    // inserted untouched so the highlight is exactly what was stored.
    const contextHost = container.querySelector<HTMLElement>('[data-context]')!;
    contextHost.innerHTML = contextHtml;
    contextHost.querySelector('mark')?.scrollIntoView({ block: 'center' });

    const form = container.querySelector<HTMLFormElement>('[data-review-form]');
    if (!form) return;
    for (const button of form.querySelectorAll<HTMLButtonElement>('button[data-decision]')) {
      button.addEventListener('click', () => {
        void submit(current, button.dataset.decision as ReviewDecision);
      });
    }
  };

  const submit = async (current: EvidenceRecordView, decision: ReviewDecision) => {
    const category = container.querySelector<HTMLSelectElement>('[data-category]')!
      .value as ErrorCategory;
    const comment =
      container.querySelector<HTMLTextAreaElement>('[data-comment]')!.value.trim() || undefined;

    // Optimistic: flip the chip before the service confirms.
    const optimistic: EvidenceRecordView = {
      ...current,
      status: decision === 'approve' ? 'Approved' : 'Rejected',
      reviewer_category: category,
      reviewer_comment: comment,
    };
    render(optimistic);

    try {
      const confirmed = await ctx.api.review(current.record_id, decision, category, comment);
      render(confirmed);
    } catch (error) {
      if (error instanceof ConflictError) {
        // First review wins: show what the service actually holds.
        const actual = await ctx.api.getRecord(current.record_id);
        render(actual, `Already reviewed: ${error.message}`);
      } else {
        render(current, error instanceof Error ? error.message : String(error));
      }
    }
  };

  render(record);
}
