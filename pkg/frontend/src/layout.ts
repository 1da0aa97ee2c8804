/**
 * Deterministic experiment-tree layout.
 *
 * Rows are generations (depth from root), columns come from a depth-first
 * walk with children in branch order (sequence number): each leaf claims the
 * next free column, each internal node sits at the mean of its children.
 * A pure function of the tree document, so the same tree always lays out
 * identically — the snapshot tests depend on that.
 */

import type { TreeDoc, TreeNode } from './types.js';

export const H_STEP = 96;
export const V_STEP = 72;
export const MARGIN = 48;

export interface LaidOutNode {
  nodeId: string;
  parentId: string | null;
  seq: number;
  comment: string | null;
  isHead: boolean;
  depth: number;
  column: number;
  x: number;
  y: number;
}

export interface TreeLayout {
  nodes: LaidOutNode[];
  edges: { from: string; to: string }[];
  width: number;
  height: number;
}

export function layoutTree(doc: TreeDoc): TreeLayout {
  const byId = new Map<string, TreeNode>(doc.nodes.map((n) => [n.node_id, n]));
  const nodes: LaidOutNode[] = [];
  const edges: { from: string; to: string }[] = [];
  let nextColumn = 0;
  let maxDepth = 0;

  const place = (nodeId: string, depth: number): number => {
    const node = byId.get(nodeId);
    if (!node) return nextColumn;
    maxDepth = Math.max(maxDepth, depth);
    const children = node.children
      .filter((child) => byId.has(child))
      .sort((a, b) => byId.get(a)!.seq - byId.get(b)!.seq);
    let column: number;
    if (children.length === 0) {
      column = nextColumn;
      nextColumn += 1;
    } else {
      const childColumns = children.map((child) => {
        edges.push({ from: nodeId, to: child });
        return place(child, depth + 1);
      });
      column = childColumns.reduce((sum, c) => sum + c, 0) / childColumns.length;
    }
    nodes.push({
      nodeId,
      parentId: node.parent_id,
      seq: node.seq,
      comment: node.comment,
      isHead: doc.head_id === nodeId,
      depth,
      column,
      x: MARGIN + column * H_STEP,
      y: MARGIN + depth * V_STEP,
    });
    return column;
  };

  if (doc.root_id !== null) {
    place(doc.root_id, 0);
  }
  nodes.sort((a, b) => a.seq - b.seq);
  edges.sort((a, b) => (a.from + a.to < b.from + b.to ? -1 : 1));

  const columns = nodes.length ? Math.max(...nodes.map((n) => n.column)) : 0;
  return {
    nodes,
    edges,
    width: MARGIN * 2 + columns * H_STEP,
    height: MARGIN * 2 + maxDepth * V_STEP,
  };
}
