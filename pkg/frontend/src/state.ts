// View state and the pure filter logic behind the explorer. Filters and the
// timeline slider only hide elements; the loaded graph document is never
// mutated, so resetting the state restores the initial scene exactly.

import { EdgeKey, GraphDocument, GraphEdge, RELATION_TYPES, edgeKey } from "./types.js";

export interface RetainedSimulation {
  raw: string; // exact response body, byte-for-byte
  parsed: import("./types.js").SimulateResponse;
  requestedAt: number; // request sequence number
}

export interface InterventionPanel {
  source: string | null;
  value: number;
  hops: number;
  lambda: number;
}

export interface ViewState {
  selectedNode: string | null;
  selectedEdge: EdgeKey | null;
  roleFilter: string | null;
  relationFilter: Set<string>;
  sliderPosition: number;
  sliderMax: number;
  intervention: InterventionPanel;
  lastSimulation: RetainedSimulation | null;
  previousSimulation: RetainedSimulation | null;
}

export function maxEvidenceTurn(doc: GraphDocument): number {
  let max = 0;
  for (const edge of doc.edges) {
    for (const item of edge.evidence) {
      if (item.turn_index > max) max = item.turn_index;
    }
  }
  return max;
}

export function initialState(doc: GraphDocument): ViewState {
  const max = maxEvidenceTurn(doc);
  return {
    selectedNode: null,
    selectedEdge: null,
    roleFilter: null,
    relationFilter: new Set(RELATION_TYPES),
    sliderPosition: max,
    sliderMax: max,
    intervention: { source: null, value: 1.0, hops: 3, lambda: 0.8 },
    lastSimulation: null,
    previousSimulation: null,
  };
}

export function resetView(state: ViewState, doc: GraphDocument): ViewState {
  const fresh = initialState(doc);
  // keep the intervention panel; view filters and selections reset
  fresh.intervention = state.intervention;
  return fresh;
}

export function earliestEvidenceTurn(edge: GraphEdge): number | null {
  if (edge.evidence.length === 0) return null;
  return Math.min(...edge.evidence.map((item) => item.turn_index));
}

/** Edges surviving the timeline slider: an edge is hidden when its earliest
 * evidence turn exceeds the position; evidence-free edges stay visible. */
export function edgesAtSlider(doc: GraphDocument, position: number): GraphEdge[] {
  return doc.edges.filter((edge) => {
    const earliest = earliestEvidenceTurn(edge);
    return earliest === null || earliest <= position;
  });
}

/** Edges visible under the relation-type filter and the slider together. */
export function visibleEdges(doc: GraphDocument, state: ViewState): GraphEdge[] {
  return edgesAtSlider(doc, state.sliderPosition).filter((edge) =>
    state.relationFilter.has(edge.relation),
  );
}

export interface RoleEmphasis {
  opaqueEdges: Set<EdgeKey>;
  opaqueNodes: Set<string>;
  dimmed: boolean; // false when no role filter is active
}

/** Role-based flow emphasis: with a role selected, only edges carrying
 * evidence from that role (and their endpoints) stay fully opaque; everything
 * else dims but remains in the scene. */
export function roleEmphasis(doc: GraphDocument, state: ViewState): RoleEmphasis {
  if (!state.roleFilter) {
    return {
      opaqueEdges: new Set(doc.edges.map(edgeKey)),
      opaqueNodes: new Set(doc.nodes.map((n) => n.id)),
      dimmed: false,
    };
  }
  const opaqueEdges = new Set<EdgeKey>();
  const opaqueNodes = new Set<string>();
  for (const edge of doc.edges) {
    if (edge.evidence.some((item) => item.role === state.roleFilter)) {
      opaqueEdges.add(edgeKey(edge));
      opaqueNodes.add(edge.subject);
      opaqueNodes.add(edge.object);
    }
  }
  for (const node of doc.nodes) {
    if (node.roles.includes(state.roleFilter)) opaqueNodes.add(node.id);
  }
  return { opaqueEdges, opaqueNodes, dimmed: true };
}

export interface Scene {
  nodeIds: string[];
  edgeKeys: EdgeKey[];
}

/** Everything the renderer must place for a given document and state. Nodes
 * are never hidden by the filters; edges honour slider + relation filter. */
export function sceneFrom(doc: GraphDocument, state: ViewState): Scene {
  return {
    nodeIds: doc.nodes.map((node) => node.id),
    edgeKeys: visibleEdges(doc, state).map(edgeKey),
  };
}

/** Record a finished simulation, rotating the prior one into the comparison
 * slot. The raw body is retained untouched: the UI displays exactly what the
 * server returned. */
export function retainSimulation(
  state: ViewState,
  raw: string,
  requestedAt: number,
): ViewState {
  const parsed = JSON.parse(raw);
  return {
    ...state,
    previousSimulation: state.lastSimulation,
    lastSimulation: { raw, parsed, requestedAt },
  };
}

/** Monotonic request sequencing so a stale simulation response can never
 * overwrite a newer one. */
export class RequestSequencer {
  private latest = 0;

  begin(): number {
    this.latest += 1;
    return this.latest;
  }

  isCurrent(token: number): boolean {
    return token === this.latest;
  }
}
