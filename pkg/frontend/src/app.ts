/**
 * Hash-routed entry point. Three screens: the record worklist, a record's
 * detail (highlighted context + review form), and the per-document
 * reports. The service base URL defaults to same-origin so the app can be
 * mounted by the service itself at /ui.
 */

import { ApiClient } from './api.js';
import { renderRecordList } from './views/records.js';
import { renderRecordDetail } from './views/detail.js';
import { renderReports } from './views/reports.js';

declare global {
  interface Window {
    POLICYQA_BASE_URL?: string;
  }
}

const api = new ApiClient(window.POLICYQA_BASE_URL ?? '');

function navigate(hash: string): void {
  window.location.hash = hash;
}

function route(): void {
  const app = document.getElementById('app');
  if (!app) return;
  const hash = window.location.hash || '#/records';

  for (const link of document.querySelectorAll<HTMLAnchorElement>('nav a[data-route]')) {
    link.classList.toggle('active', hash.startsWith(link.dataset.route!));
  }

  const detail = hash.match(/^#\/records\/(.+)$/);
  if (detail) {
    void renderRecordDetail(app, decodeURIComponent(detail[1]!), { api, navigate });
  } else if (hash.startsWith('#/reports')) {
    void renderReports(app, { api });
  } else {
    void renderRecordList(app, { api, navigate });
  }
}

window.addEventListener('hashchange', route);
route();
