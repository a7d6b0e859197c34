import { describe, expect, it, vi } from 'vitest';

import { PAGE_SIZE, renderRecordList } from '../src/views/records.js';
import { FakeApi, flush, makeRecord } from './fakes.js';

function setup() {
  document.body.innerHTML = '<main id="app"></main>';
  const container = document.getElementById('app')!;
  const api = new FakeApi();
  const navigate = vi.fn();
  return { container, api, navigate };
}

describe('record list', () => {
  it('lists records with metric, pipeline, outcome and status', async () => {
    const { container, api, navigate } = setup();

    await renderRecordList(container, { api, navigate });
    await flush();

    const row = container.querySelector('tbody tr')!;
    expect(row.textContent).toContain('PasswordPolicyQ2');
    expect(row.textContent).toContain("What is the password's maximum age");
    expect(row.textContent).toContain('keyword');
    expect(row.textContent).toContain('Compliant');
    expect(row.querySelector('[data-status]')!.textContent).toBe('Pending');
  });

  it('navigates to the detail view on row click', async () => {
    const { container, api, navigate } = setup();
    await renderRecordList(container, { api, navigate });
    await flush();

    container.querySelector<HTMLTableRowElement>('tbody tr')!.click();

    expect(navigate).toHaveBeenCalledWith('#/records/r-0123456789ab');
  });

  it('pushes the status filter down to the service', async () => {
    const { container, api, navigate } = setup();
    await renderRecordList(container, { api, navigate });
    await flush();

    const statusSelect = container.querySelector<HTMLSelectElement>('[data-filter="status"]')!;
    statusSelect.value = 'Pending';
    statusSelect.dispatchEvent(new Event('change'));
    await flush();

    expect(api.calls).toContain('listRecords(,Pending)');
  });

  it('filters by outcome client-side', async () => {
    const { container, api, navigate } = setup();
    api.records = [
      makeRecord(),
      makeRecord({
        record_id: 'r-badbadbadbad',
        metric_name: 'RetentionQ1',
        assessment: { ...makeRecord().assessment, outcome: 'NonCompliant' },
      }),
    ];
    await renderRecordList(container, { api, navigate });
    await flush();
    expect(container.querySelectorAll('tbody tr').length).toBe(2);

    const outcomeSelect = container.querySelector<HTMLSelectElement>('[data-filter="outcome"]')!;
    outcomeSelect.value = 'NonCompliant';
    outcomeSelect.dispatchEvent(new Event('change'));
    await flush();

    const rows = container.querySelectorAll('tbody tr');
    expect(rows.length).toBe(1);
    expect(rows[0]!.textContent).toContain('RetentionQ1');
  });

  it('pages long lists and keeps the remainder on the last page', async () => {
    const { container, api, navigate } = setup();
    api.records = Array.from({ length: PAGE_SIZE + 5 }, (_, i) =>
      makeRecord({ record_id: `r-${String(i).padStart(12, '0')}` }),
    );
    await renderRecordList(container, { api, navigate });
    await flush();

    expect(container.querySelectorAll('tbody tr').length).toBe(PAGE_SIZE);
    expect(container.querySelector('.pager span')!.textContent).toBe('page 1 of 2');

    container.querySelector<HTMLButtonElement>('[data-page="next"]')!.click();
    await flush();

    expect(container.querySelectorAll('tbody tr').length).toBe(5);
    expect(container.querySelector('.pager span')!.textContent).toBe('page 2 of 2');
    expect(
      container.querySelector<HTMLButtonElement>('[data-page="next"]')!.disabled,
    ).toBe(true);
  });

  it('shows unanswerable records without inventing answer text', async () => {
    const { container, api, navigate } = setup();
    api.records = [
      makeRecord({
        answer: { text: '', start_offset: 0, end_offset: 0, score: 0.9, answerable: false },
        assessment: { ...makeRecord().assessment, parsed_value: null, outcome: 'Undetermined' },
      }),
    ];
    await renderRecordList(container, { api, navigate });
    await flush();

    expect(container.querySelector('.answer-cell')!.textContent).toBe('(no answer)');
  });

  it('surfaces list failures inline', async () => {
    const { container, api, navigate } = setup();
    api.listRecords = async () => {
      throw new Error('service unavailable');
    };

    await renderRecordList(container, { api, navigate });
    await flush();

    expect(container.querySelector('.error-banner')!.textContent).toContain('service unavailable');
  });
});
