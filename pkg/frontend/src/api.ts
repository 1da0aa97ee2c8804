/**
 * Typed client for the local JSON API.
 *
 * Every response is an envelope with exactly one of data/error; this client
 * unwraps data and turns error envelopes (and network failures) into
 * ApiError, so callers can branch on `status` / `code` without touching raw
 * responses. The fetch function is injectable for tests.
 */

import type {
  DiffDoc,
  Envelope,
  FlowDoc,
  KnowledgeDoc,
  RecommendDoc,
  ReviewDoc,
  TreeDoc,
} from './types.js';

export interface ResponseLike {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<ResponseLike>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }

  get unreachable(): boolean {
    return this.status === 0;
  }
}

export class ApiClient {
  constructor(
    private readonly base = '',
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: ResponseLike;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, 'unreachable', String(err));
    }
    let doc: Envelope<T> | null = null;
    try {
      doc = (await response.json()) as Envelope<T>;
    } catch {
      throw new ApiError(response.status, 'bad-envelope', 'response body was not JSON');
    }
    if (doc && doc.error) {
      throw new ApiError(response.status, doc.error.code, doc.error.message);
    }
    if (!doc || doc.data === undefined) {
      throw new ApiError(response.status, 'bad-envelope', 'envelope carried no data');
    }
    return doc.data;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  tree(): Promise<TreeDoc> {
    return this.request<TreeDoc>('/api/tree');
  }

  diff(a: string, b: string): Promise<DiffDoc> {
    return this.request<DiffDoc>(`/api/diff?a=${encodeURIComponent(a)}&b=${encodeURIComponent(b)}`);
  }

  checkout(nodeId: string): Promise<unknown> {
    return this.post('/api/checkout', { node_id: nodeId });
  }

  annotate(nodeId: string, comment: string): Promise<unknown> {
    return this.post('/api/annotate', { node_id: nodeId, comment });
  }

  flow(nodeId: string): Promise<FlowDoc> {
    return this.request<FlowDoc>(`/api/flow?node=${encodeURIComponent(nodeId)}`);
  }

  review(nodeId: string): Promise<ReviewDoc> {
    return this.request<ReviewDoc>(`/api/review?node=${encodeURIComponent(nodeId)}`);
  }

  recommendCell(nodeId: string, cellId: string, k = 5): Promise<RecommendDoc> {
    return this.request<RecommendDoc>(
      `/api/recommend/cell?node=${encodeURIComponent(nodeId)}&cell=${encodeURIComponent(cellId)}&k=${k}`,
    );
  }

  knowledgeForCell(cellId: string): Promise<KnowledgeDoc> {
    return this.request<KnowledgeDoc>(`/api/knowledge?cell=${encodeURIComponent(cellId)}`);
  }
}
