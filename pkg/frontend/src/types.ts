/** Payload types for the local JSON API. Mirrors the versioned schemas. */

export interface ApiErrorBody {
  code: string;
  message: string;
}

export interface Envelope<T> {
  schema: string;
  data?: T;
  error?: ApiErrorBody;
}

export interface TreeNode {
  node_id: string;
  parent_id: string | null;
  content_hash: string;
  trigger_cell_id: string | null;
  comment: string | null;
  created_at: string;
  seq: number;
  children: string[];
}

export interface TreeDoc {
  schema: string;
  root_id: string | null;
  head_id: string | null;
  nodes: TreeNode[];
}

export interface DiffSummary {
  added: number;
  removed: number;
  modified: number;
  moved: number;
}

export interface DiffDoc {
  schema: string;
  summary: DiffSummary;
  entries: unknown[];
}

export interface FlowActivity {
  cell_id: string;
  category: string;
  label: string;
  description: string;
}

export interface FlowEdge {
  from: string;
  to: string;
  symbol: string;
}

export interface FlowDoc {
  schema: string;
  notebook_hash: string;
  activities: FlowActivity[];
  edges: FlowEdge[];
}

export interface Finding {
  rule_id: string;
  passed: boolean;
  severity: string | null;
  locations: string[];
  message: string;
}

export interface ReviewDoc {
  schema: string;
  notebook_hash: string;
  findings: Finding[];
  persona_scores: Record<string, number>;
}

export interface RecommendationItem {
  rank: number;
  score: number;
  target: [string, string] | string;
}

export interface RecommendDoc {
  schema: string;
  items: RecommendationItem[];
}

export interface KnowledgeItem {
  source: {
    source_id: string;
    kind: string;
    title: string;
    url: string | null;
    author: string | null;
  };
  rationale: string;
}

export interface KnowledgeDoc {
  items: KnowledgeItem[];
}
