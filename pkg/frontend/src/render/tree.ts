/**
 * SVG rendering of the experiment tree.
 *
 * Pure string producer: state in, markup out. Nodes carry data-node-id for
 * event delegation; the head node gets a marker ring; selected/hovered nodes
 * get classes the stylesheet highlights. No numbers are computed here beyond
 * coordinates — everything shown comes from the API documents.
 */

import type { TreeLayout } from '../layout.js';
import type { DiffSummary } from '../types.js';

export interface TreeViewState {
  selectedId: string | null;
  hoverId: string | null;
}

const esc = (text: string): string =>
  text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');

export function renderTree(layout: TreeLayout, state: TreeViewState): string {
  const byId = new Map(layout.nodes.map((n) => [n.nodeId, n]));
  const edges = layout.edges
    .map((edge) => {
      const from = byId.get(edge.from);
      const to = byId.get(edge.to);
      if (!from || !to) return '';
      return `<path class="tree-edge" d="M ${from.x} ${from.y + 14} C ${from.x} ${from.y + 40}, ${to.x} ${to.y - 40}, ${to.x} ${to.y - 14}"/>`;
    })
    .join('');

  const nodes = layout.nodes
    .map((node) => {
      const classes = ['node'];
      if (node.isHead) classes.push('head');
      if (node.nodeId === state.selectedId) classes.push('selected');
      if (node.nodeId === state.hoverId) classes.push('hover');
      const headRing = node.isHead ? '<circle class="head-ring" r="19"/>' : '';
      const commentDot = node.comment ? '<circle class="comment-dot" cx="12" cy="-12" r="4"/>' : '';
      return (
        `<g class="${classes.join(' ')}" data-node-id="${esc(node.nodeId)}" transform="translate(${node.x},${node.y})">` +
        headRing +
        `<circle class="node-circle" r="14"/>` +
        `<text class="node-seq" dy="4">${node.seq}</text>` +
        commentDot +
        `<title>${esc(node.nodeId.slice(0, 12))}</title>` +
        `</g>`
      );
    })
    .join('');

  return (
    `<svg class="tree-view" width="${layout.width}" height="${layout.height}" viewBox="0 0 ${layout.width} ${layout.height}">` +
    `<g class="edges">${edges}</g><g class="nodes">${nodes}</g></svg>`
  );
}

export interface TooltipModel {
  nodeId: string;
  comment: string | null;
  /** null means the node has no parent (root). */
  summary: DiffSummary | null;
}

export function renderTooltip(tip: TooltipModel): string {
  const lines: string[] = [`<div class="tooltip" data-node-id="${esc(tip.nodeId)}">`];
  if (tip.summary === null) {
    lines.push('<p class="diff-line no-parent">no parent</p>');
  } else {
    lines.push(
      `<p class="diff-line">+${tip.summary.added} added, -${tip.summary.removed} removed, ` +
        `~${tip.summary.modified} modified, ${tip.summary.moved} moved</p>`,
    );
  }
  if (tip.comment) {
    lines.push(`<p class="comment">${esc(tip.comment)}</p>`);
  }
  lines.push('</div>');
  return lines.join('');
}
