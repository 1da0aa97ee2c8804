import { afterEach, describe, expect, it, vi } from 'vitest';

import type { ApiClient } from '../src/api.js';
import { ApiError } from '../src/api.js';
import { AppController } from '../src/controller.js';
import type { DiffDoc, FlowDoc, KnowledgeDoc, RecommendDoc, ReviewDoc, TreeDoc } from '../src/types.js';
import { dataOf } from './helpers.js';

const treeDoc = dataOf<TreeDoc>('tree.json');
const diffDoc = dataOf<DiffDoc>('diff_root_child.json');
const flowDoc = dataOf<FlowDoc>('flow.json');
const reviewDoc = dataOf<ReviewDoc>('review.json');
const recommendDoc = dataOf<RecommendDoc>('recommend.json');
const knowledgeDoc = dataOf<KnowledgeDoc>('knowledge.json');

class StubApi {
  calls: Record<string, number> = {};
  failWith: Partial<Record<string, unknown>> = {};

  private hit(name: string): void {
    this.calls[name] = (this.calls[name] ?? 0) + 1;
    if (this.failWith[name]) throw this.failWith[name];
  }

  async tree(): Promise<TreeDoc> {
    this.hit('tree');
    return treeDoc;
  }

  async checkout(_nodeId: string): Promise<unknown> {
    this.hit('checkout');
    return {};
  }

  async diff(_a: string, _b: string): Promise<DiffDoc> {
    this.hit('diff');
    return diffDoc;
  }

  async flow(_nodeId: string): Promise<FlowDoc> {
    this.hit('flow');
    return flowDoc;
  }

  async review(_nodeId: string): Promise<ReviewDoc> {
    this.hit('review');
    return reviewDoc;
  }

  async recommendCell(_nodeId: string, _cellId: string, _k: number): Promise<RecommendDoc> {
    this.hit('recommendCell');
    return recommendDoc;
  }

  async knowledgeForCell(_cellId: string): Promise<KnowledgeDoc> {
    this.hit('knowledgeForCell');
    return knowledgeDoc;
  }
}

function makeController(stub: StubApi): AppController {
  return new AppController(stub as unknown as ApiClient);
}

afterEach(() => {
  vi.useRealTimers();
});

describe('AppController', () => {
  it('node click issues exactly one POST /api/checkout', async () => {
    const stub = new StubApi();
    const controller = makeController(stub);
    await controller.refreshTree();
    await controller.handleNodeClick(treeDoc.nodes[1].node_id);
    expect(stub.calls.checkout).toBe(1);
    expect(controller.state.selectedId).toBe(treeDoc.nodes[1].node_id);
    expect(controller.state.flow).toEqual(flowDoc);
    expect(controller.state.review).toEqual(reviewDoc);
  });

  it('unreachable service raises a persistent banner; retry clears it', async () => {
    const stub = new StubApi();
    stub.failWith.tree = new ApiError(0, 'unreachable', 'connection refused');
    const controller = makeController(stub);
    await controller.refreshTree();
    expect(controller.state.banner).toContain('unreachable');

    stub.failWith.tree = undefined;
    await controller.retry();
    expect(controller.state.banner).toBeNull();
    expect(controller.state.tree).toEqual(treeDoc);
  });

  it('stale node (404) on checkout refreshes the tree instead of bannering', async () => {
    const stub = new StubApi();
    const controller = makeController(stub);
    await controller.refreshTree();
    const before = stub.calls.tree ?? 0;
    stub.failWith.checkout = new ApiError(404, 'unknown-node', 'gone');
    await controller.handleNodeClick('deadbeef');
    expect(stub.calls.tree).toBe(before + 1);
    expect(controller.state.banner).toBeNull();
  });

  it('hover on the root shows the no-parent tooltip without a diff call', async () => {
    const stub = new StubApi();
    const controller = makeController(stub);
    await controller.refreshTree();
    await controller.handleNodeHover(treeDoc.root_id!);
    expect(controller.state.tooltip?.summary).toBeNull();
    expect(stub.calls.diff).toBeUndefined();
  });

  it('hover on a child shows the diff-vs-parent summary and caches it', async () => {
    const stub = new StubApi();
    const controller = makeController(stub);
    await controller.refreshTree();
    const child = treeDoc.nodes.find((n) => n.parent_id !== null)!;
    await controller.handleNodeHover(child.node_id);
    expect(controller.state.tooltip?.summary).toEqual(diffDoc.summary);
    await controller.handleNodeHover(null);
    await controller.handleNodeHover(child.node_id);
    expect(stub.calls.diff).toBe(1);
  });

  it('cell selection loads recommendations and traced knowledge', async () => {
    const stub = new StubApi();
    const controller = makeController(stub);
    await controller.refreshTree();
    await controller.handleNodeClick(treeDoc.root_id!);
    await controller.selectCell('load');
    expect(controller.state.recommendations).toEqual(recommendDoc);
    expect(controller.state.knowledge).toEqual(knowledgeDoc);
    expect(controller.state.recommendedCell).toBe('load');
  });

  it('missing index (400) shows an empty recommendation list, not a banner', async () => {
    const stub = new StubApi();
    stub.failWith.recommendCell = new ApiError(400, 'bad-request', 'no similarity index');
    const controller = makeController(stub);
    await controller.refreshTree();
    await controller.handleNodeClick(treeDoc.root_id!);
    await controller.selectCell('load');
    expect(controller.state.recommendations?.items).toEqual([]);
    expect(controller.state.banner).toBeNull();
  });

  it('polls the tree on the configured interval until stopped', async () => {
    vi.useFakeTimers();
    const stub = new StubApi();
    const controller = makeController(stub);
    controller.startPolling(2000);
    await vi.advanceTimersByTimeAsync(6100);
    expect(stub.calls.tree).toBe(3);
    controller.stopPolling();
    await vi.advanceTimersByTimeAsync(10000);
    expect(stub.calls.tree).toBe(3);
  });

  it('notifies the renderer on every state change', async () => {
    const stub = new StubApi();
    const states: unknown[] = [];
    const controller = new AppController(stub as unknown as ApiClient, (s) => states.push(s.tree));
    await controller.refreshTree();
    expect(states.length).toBeGreaterThan(0);
  });
});
