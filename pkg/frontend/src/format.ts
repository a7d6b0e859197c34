/** Small rendering helpers shared by the views. */

/** Escape text for interpolation into HTML. */
export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

/** A value already scaled to 0–100, e.g. 57.6271 → "57.63%". */
export function formatPercentValue(value: number): string {
  return `${value.toFixed(2)}%`;
}

/** A fraction, e.g. 0.7816 → "78.16%". */
export function formatFraction(value: number): string {
  return `${(100 * value).toFixed(2)}%`;
}

/** Scores (quality, model, similarity) rendered at fixed width. */
export function formatScore(value: number | null): string {
  return value === null ? '–' : value.toFixed(3);
}

/** Shorten long answer text for table rows. */
export function truncate(text: string, max = 90): string {
  return text.length <= max ? text : `${text.slice(0, max - 1)}…`;
}
