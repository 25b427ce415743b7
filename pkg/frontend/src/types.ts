// Wire formats of the stakegraph HTTP API. The explorer never recomputes
// anything the server owns; these types mirror the JSON verbatim.

export interface GraphNode {
  id: string;
  dimension: string | null;
  roles: string[];
  evidence_count: number;
}

export interface EvidenceRef {
  dialogue_id: string;
  turn_index: number;
  cue: string;
  role?: string | null;
}

export interface GraphEdge {
  subject: string;
  relation: string;
  object: string;
  weight: number;
  evidence: EvidenceRef[];
}

export interface GraphDocument {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export type EdgeKey = string; // "subject|relation|object"

export function edgeKey(edge: Pick<GraphEdge, "subject" | "relation" | "object">): EdgeKey {
  return `${edge.subject}|${edge.relation}|${edge.object}`;
}

export interface SimulateRequest {
  source: string;
  value: number;
  hops: number;
  lambda: number;
}

export interface TraceStep {
  hop: number;
  kind: string;
  subject: string;
  relation: string;
  object: string;
  value: number;
}

export interface SimulateResponse {
  source: string;
  injected: number;
  hops: number;
  attenuation: number;
  activations: Record<string, number>;
  levels: Record<string, number>;
  trace: TraceStep[];
}

export interface PromptTrace {
  prompt_id: string;
  template_id: string;
  role: string;
  theme: string;
  scenario: string;
  seed: number;
  variable_targets: string[];
  statement_refs: [string, number][];
}

export interface EvidenceItem extends EvidenceRef {
  text?: string | null;
  prompt_id?: string | null;
  trace?: PromptTrace | null;
}

export interface EvidenceResponse {
  subject: string;
  relation: string;
  object: string;
  weight: number;
  evidence: EvidenceItem[];
}

export const RELATION_TYPES = [
  "Causal",
  "Dependency",
  "Modulation",
  "Reinforcement",
  "Inhibition",
] as const;

export const RELATION_SIGNS: Record<string, number> = {
  Causal: 1,
  Dependency: 1,
  Reinforcement: 1,
  Inhibition: -1,
  Modulation: 0,
};
