/**
 * Top-to-bottom activity-flow rendering: one colored box per code cell in
 * notebook order, dependency edges labeled with the symbol they carry.
 */

import type { FlowDoc } from '../types.js';

export const CATEGORY_COLORS: Record<string, string> = {
  Setup: '#d9d9d9',
  DataLoading: '#a6cee3',
  Preprocessing: '#b2df8a',
  Exploration: '#fdbf6f',
  Modeling: '#fb9a99',
  Evaluation: '#cab2d6',
  Visualization: '#ffff99',
  Other: '#ffffff',
};

const BOX_W = 240;
const BOX_H = 44;
const GAP = 36;
const MARGIN = 24;

const esc = (text: string): string =>
  text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');

export function renderFlow(doc: FlowDoc): string {
  const positions = new Map<string, number>();
  doc.activities.forEach((activity, i) => positions.set(activity.cell_id, i));
  const centerX = MARGIN + BOX_W / 2;

  const boxes = doc.activities
    .map((activity, i) => {
      const y = MARGIN + i * (BOX_H + GAP);
      const color = CATEGORY_COLORS[activity.category] ?? CATEGORY_COLORS.Other;
      return (
        `<g class="flow-node category-${esc(activity.category)}" data-cell-id="${esc(activity.cell_id)}">` +
        `<rect x="${MARGIN}" y="${y}" width="${BOX_W}" height="${BOX_H}" rx="6" fill="${color}"/>` +
        `<text class="flow-label" x="${centerX}" y="${y + 18}">${esc(activity.label)}</text>` +
        `<text class="flow-cell" x="${centerX}" y="${y + 34}">${esc(activity.cell_id)}</text>` +
        `<title>${esc(activity.description)}</title>` +
        `</g>`
      );
    })
    .join('');

  const edges = doc.edges
    .map((edge) => {
      const fromIdx = positions.get(edge.from);
      const toIdx = positions.get(edge.to);
      if (fromIdx === undefined || toIdx === undefined) return '';
      const y1 = MARGIN + fromIdx * (BOX_H + GAP) + BOX_H;
      const y2 = MARGIN + toIdx * (BOX_H + GAP);
      const bow = (toIdx - fromIdx) > 1 ? 70 * (toIdx - fromIdx) : 0;
      const midY = (y1 + y2) / 2;
      const labelX = centerX + (bow ? bow / 2 + 120 : 8);
      const path =
        bow === 0
          ? `M ${centerX} ${y1} L ${centerX} ${y2}`
          : `M ${centerX + BOX_W / 2 - 120} ${y1} C ${centerX + bow} ${y1 + 20}, ${centerX + bow} ${y2 - 20}, ${centerX + BOX_W / 2 - 120} ${y2}`;
      return (
        `<g class="flow-edge" data-symbol="${esc(edge.symbol)}">` +
        `<path d="${path}" marker-end="url(#arrow)"/>` +
        `<text class="edge-label" x="${labelX}" y="${midY}">${esc(edge.symbol)}</text>` +
        `</g>`
      );
    })
    .join('');

  const height = MARGIN * 2 + doc.activities.length * (BOX_H + GAP);
  const width = MARGIN * 2 + BOX_W + 240;
  return (
    `<svg class="flow-view" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">` +
    `<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto">` +
    `<path d="M0,0 L8,4 L0,8 z"/></marker></defs>` +
    `<g class="edges">${edges}</g><g class="nodes">${boxes}</g></svg>`
  );
}
