/**
 * Review dashboard: pass/fail list plus per-persona score bars. Scores and
 * messages come verbatim from the report document.
 */

import type { ReviewDoc } from '../types.js';

const esc = (text: string): string =>
  text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');

export function renderReview(doc: ReviewDoc): string {
  const findings = doc.findings
    .map((finding) => {
      const status = finding.passed ? 'pass' : 'fail';
      const mark = finding.passed ? '&#10003;' : '&#10007;';
      const cells = finding.locations.length
        ? `<span class="locations">${esc(finding.locations.join(', '))}</span>`
        : '';
      return (
        `<li class="finding ${status}" data-rule-id="${esc(finding.rule_id)}">` +
        `<span class="mark">${mark}</span>` +
        `<span class="rule">${esc(finding.rule_id)}</span>` +
        `<span class="message">${esc(finding.message)}</span>${cells}</li>`
      );
    })
    .join('');

  const bars = Object.entries(doc.persona_scores)
    .sort(([a], [b]) => (a < b ? -1 : 1))
    .map(
      ([persona, score]) =>
        `<div class="persona-row" data-persona="${esc(persona)}">` +
        `<span class="persona-name">${esc(persona)}</span>` +
        `<div class="score-track"><div class="score-bar" style="width:${score}%"></div></div>` +
        `<span class="score-value">${score}</span></div>`,
    )
    .join('');

  return (
    `<div class="review-view">` +
    `<ul class="findings">${findings}</ul>` +
    `<div class="personas">${bars}</div>` +
    `</div>`
  );
}
