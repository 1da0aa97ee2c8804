/**
 * UI state machine, free of DOM concerns so it runs under plain vitest.
 *
 * All data flows one way: API responses land in `state`, the notify callback
 * re-renders. Contracts encoded here: a node click issues exactly one
 * checkout POST; an unreachable service raises a persistent banner that a
 * retry clears; a stale-node 404 triggers a tree refresh; hovering shows the
 * diff-vs-parent summary (or the no-parent marker on the root).
 */

import { ApiClient, ApiError } from './api.js';
import type { TooltipModel } from './render/tree.js';
import type { FlowDoc, KnowledgeDoc, RecommendDoc, ReviewDoc, TreeDoc } from './types.js';

export interface AppState {
  tree: TreeDoc | null;
  banner: string | null;
  selectedId: string | null;
  hoverId: string | null;
  flow: FlowDoc | null;
  review: ReviewDoc | null;
  recommendations: RecommendDoc | null;
  recommendedCell: string | null;
  knowledge: KnowledgeDoc | null;
  tooltip: TooltipModel | null;
}

export type Notify = (state: AppState) => void;

type IntervalHandle = ReturnType<typeof setInterval>;

export class AppController {
  readonly state: AppState = {
    tree: null,
    banner: null,
    selectedId: null,
    hoverId: null,
    flow: null,
    review: null,
    recommendations: null,
    recommendedCell: null,
    knowledge: null,
    tooltip: null,
  };

  private diffCache = new Map<string, TooltipModel>();
  private pollHandle: IntervalHandle | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly notify: Notify = () => {},
  ) {}

  private emit(): void {
    this.notify(this.state);
  }

  async refreshTree(): Promise<void> {
    try {
      this.state.tree = await this.api.tree();
      this.state.banner = null;
      this.diffCache.clear();
    } catch (err) {
      this.state.banner = this.describeFailure(err);
    }
    this.emit();
  }

  private describeFailure(err: unknown): string {
    if (err instanceof ApiError && err.unreachable) {
      return 'service unreachable — is `protoml serve` running?';
    }
    return err instanceof Error ? err.message : String(err);
  }

  /** Click on a tree node: checkout (exactly one POST), then open its views. */
  async handleNodeClick(nodeId: string): Promise<void> {
    try {
      await this.api.checkout(nodeId);
      this.state.selectedId = nodeId;
      await this.loadNodeViews(nodeId);
      await this.refreshTree();
    } catch (err) {
      await this.handleFailure(err);
    }
  }

  private async loadNodeViews(nodeId: string): Promise<void> {
    const [flow, review] = await Promise.all([this.api.flow(nodeId), this.api.review(nodeId)]);
    this.state.flow = flow;
    this.state.review = review;
    this.emit();
  }

  /** Hover over a node (or null to clear): tooltip with diff-vs-parent. */
  async handleNodeHover(nodeId: string | null): Promise<void> {
    this.state.hoverId = nodeId;
    if (nodeId === null) {
      this.state.tooltip = null;
      this.emit();
      return;
    }
    const node = this.state.tree?.nodes.find((n) => n.node_id === nodeId);
    if (!node) return;
    const cached = this.diffCache.get(nodeId);
    if (cached) {
      this.state.tooltip = cached;
      this.emit();
      return;
    }
    let tooltip: TooltipModel;
    if (node.parent_id === null) {
      tooltip = { nodeId, comment: node.comment, summary: null };
    } else {
      try {
        const diff = await this.api.diff(node.parent_id, nodeId);
        tooltip = { nodeId, comment: node.comment, summary: diff.summary };
      } catch (err) {
        await this.handleFailure(err);
        return;
      }
    }
    this.diffCache.set(nodeId, tooltip);
    this.state.tooltip = tooltip;
    this.emit();
  }

  /** Click on a flow cell: fetch similar cells + traced knowledge sources. */
  async selectCell(cellId: string, k = 5): Promise<void> {
    if (!this.state.selectedId) return;
    try {
      this.state.recommendations = await this.api.recommendCell(this.state.selectedId, cellId, k);
      this.state.recommendedCell = cellId;
    } catch (err) {
      if (err instanceof ApiError && err.status === 400) {
        // no index built yet: show the message, keep everything else alive
        this.state.recommendations = { schema: 'recommendations/1', items: [] };
        this.state.recommendedCell = cellId;
      } else {
        await this.handleFailure(err);
        return;
      }
    }
    try {
      this.state.knowledge = await this.api.knowledgeForCell(cellId);
    } catch {
      this.state.knowledge = null;
    }
    this.emit();
  }

  /** Error policy: stale node (404) refreshes the tree; network failure banners. */
  private async handleFailure(err: unknown): Promise<void> {
    if (err instanceof ApiError && err.status === 404) {
      await this.refreshTree();
      return;
    }
    this.state.banner = this.describeFailure(err);
    this.emit();
  }

  retry(): Promise<void> {
    return this.refreshTree();
  }

  startPolling(intervalMs = 2000): void {
    if (this.pollHandle !== null) return;
    this.pollHandle = setInterval(() => {
      void this.refreshTree();
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.pollHandle !== null) {
      clearInterval(this.pollHandle);
      this.pollHandle = null;
    }
  }
}
