/**
 * Wire types mirroring the policyqa service's JSON payloads.
 *
 * Every view in this app derives its state from these shapes as the
 * service returns them — the client never recomputes an assessment or
 * rewrites evidence content.
 */

/** Review states a record can be in. Records leave Pending exactly once. */
export type RecordStatus = 'Pending' | 'Approved' | 'Rejected';

/** The four reviewer-assigned error categories, in report order. */
export const ERROR_CATEGORIES = [
  'NoError',
  'PartialMatching',
  'FalseOrOtherError',
  'NotInDocument',
] as const;

export type ErrorCategory = (typeof ERROR_CATEGORIES)[number];

export interface DocumentSummary {
  doc_id: string;
  title: string;
  source_name: string;
  section_count: number;
}

export interface MetricView {
  name: string;
  description: string;
  keywords: string[];
  operator: string;
  target_value: number | string | boolean;
  data_type: string;
  requirement_id?: string;
}

export interface AnswerView {
  text: string;
  start_offset: number;
  end_offset: number;
  score: number;
  answerable: boolean;
}

/** The stored comparison of the parsed answer against the metric target. */
export interface AssessmentView {
  metric_name: string;
  parsed_value: number | string | boolean | null;
  operator: string;
  target_value: number | string | boolean;
  data_type: string;
  outcome: string;
  rendered: string;
}

export interface SectionScoreView {
  section_id: string;
  model_score: number | null;
  similarity: number | null;
}

export interface EvidenceRecordView {
  record_id: string;
  metric_name: string;
  doc_id: string;
  pipeline: string;
  answer: AnswerView;
  assessment: AssessmentView;
  status: RecordStatus;
  reviewer_category?: ErrorCategory;
  reviewer_comment?: string;
  winning_section_id?: string;
  section_scores?: SectionScoreView[];
  created_at?: string;
  reviewed_at?: string;
  duration_ms?: number;
}

/** One row of GET /reports/quality. */
export interface QualityRow {
  pipeline: string;
  correct_count: number;
  total_annotated: number;
  score: number;
  strict_f1_mean: number;
}

/**
 * GET /reports/errors. `percentages` are already scaled to 0–100;
 * `filtered_accuracy` is a fraction over the records whose evidence was
 * actually present in the document.
 */
export interface ErrorReportView {
  counts: Record<ErrorCategory, number>;
  percentages: Record<ErrorCategory, number>;
  filtered_accuracy: number;
  total: number;
}

export type ReviewDecision = 'approve' | 'reject';
