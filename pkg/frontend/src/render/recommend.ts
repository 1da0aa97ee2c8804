/** Recommendation panel: ranked similar cells for the selected cell. */

import type { KnowledgeDoc, RecommendDoc } from '../types.js';

const esc = (text: string): string =>
  text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');

export function renderRecommendations(doc: RecommendDoc, cellId: string | null): string {
  if (!doc.items.length) {
    return `<div class="recommend-view empty">no similar cells${cellId ? ` for ${esc(cellId)}` : ''}</div>`;
  }
  const rows = doc.items
    .map((item) => {
      const target = Array.isArray(item.target) ? item.target.join(' :: ') : item.target;
      return (
        `<li class="recommendation" data-rank="${item.rank}">` +
        `<span class="rank">${item.rank}</span>` +
        `<span class="score">${item.score}</span>` +
        `<span class="target">${esc(target)}</span></li>`
      );
    })
    .join('');
  const heading = cellId ? `similar to <code>${esc(cellId)}</code>` : 'recommendations';
  return `<div class="recommend-view"><p class="heading">${heading}</p><ol>${rows}</ol></div>`;
}

export function renderKnowledge(doc: KnowledgeDoc): string {
  if (!doc.items.length) {
    return `<div class="knowledge-view empty">no traced sources</div>`;
  }
  const rows = doc.items
    .map(
      (item) =>
        `<li class="traced-source">` +
        `<span class="source-id">${esc(item.source.source_id)}</span>` +
        `<span class="title">${esc(item.source.title)}</span>` +
        (item.rationale ? `<span class="rationale">${esc(item.rationale)}</span>` : '') +
        `</li>`,
    )
    .join('');
  return `<div class="knowledge-view"><ul>${rows}</ul></div>`;
}
