/**
 * Thin client for the policyqa REST service.
 *
 * This is the only place the app talks to the outside world; views call
 * these methods and render whatever comes back. The fetch implementation
 * is injectable so tests can run without a server.
 */

import type {
  DocumentSummary,
  ErrorCategory,
  ErrorReportView,
  EvidenceRecordView,
  MetricView,
  QualityRow,
  ReviewDecision,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = 'ApiError';
  }
}

/** A review landed on a record someone else already reviewed (HTTP 409). */
export class ConflictError extends ApiError {
  constructor(detail: string) {
    super(409, detail);
    this.name = 'ConflictError';
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** The service surface the views depend on; tests substitute fakes. */
export interface ServiceApi {
  listDocuments(): Promise<DocumentSummary[]>;
  listMetrics(): Promise<MetricView[]>;
  listRecords(filter?: { docId?: string; status?: string }): Promise<EvidenceRecordView[]>;
  getRecord(recordId: string): Promise<EvidenceRecordView>;
  getRecordContext(recordId: string): Promise<string>;
  review(
    recordId: string,
    decision: ReviewDecision,
    category: ErrorCategory,
    comment?: string,
  ): Promise<EvidenceRecordView>;
  qualityReport(docId: string, annotationsRef: string): Promise<QualityRow[]>;
  errorReport(docId: string): Promise<ErrorReportView>;
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === 'string') return body.detail;
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `${response.status} ${response.statusText}`;
}

export class ApiClient implements ServiceApi {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.status === 409) {
      throw new ConflictError(await errorDetail(response));
    }
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return response;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.request(path, init);
    return (await response.json()) as T;
  }

  listDocuments(): Promise<DocumentSummary[]> {
    return this.json('/documents');
  }

  listMetrics(): Promise<MetricView[]> {
    return this.json('/metrics');
  }

  listRecords(filter: { docId?: string; status?: string } = {}): Promise<EvidenceRecordView[]> {
    const params = new URLSearchParams();
    if (filter.docId) params.set('doc_id', filter.docId);
    if (filter.status) params.set('status', filter.status);
    const query = params.toString();
    return this.json(query ? `/records?${query}` : '/records');
  }

  getRecord(recordId: string): Promise<EvidenceRecordView> {
    return this.json(`/records/${encodeURIComponent(recordId)}`);
  }

  /** Document HTML with the record's evidence span wrapped in <mark>. */
  async getRecordContext(recordId: string): Promise<string> {
    const response = await this.request(`/records/${encodeURIComponent(recordId)}/context`);
    return response.text();
  }

  review(
    recordId: string,
    decision: ReviewDecision,
    category: ErrorCategory,
    comment?: string,
  ): Promise<EvidenceRecordView> {
    return this.json(`/records/${encodeURIComponent(recordId)}/review`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ decision, category, comment: comment ?? null }),
    });
  }

  qualityReport(docId: string, annotationsRef: string): Promise<QualityRow[]> {
    const params = new URLSearchParams({ doc_id: docId, annotations_ref: annotationsRef });
    return this.json(`/reports/quality?${params}`);
  }

  errorReport(docId: string): Promise<ErrorReportView> {
    const params = new URLSearchParams({ doc_id: docId });
    return this.json(`/reports/errors?${params}`);
  }
}
