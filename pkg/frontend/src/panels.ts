// View models for the evidence panel and the intervention comparison panel.
// Pure data shaping: the numbers displayed come verbatim from the server.

import { RetainedSimulation } from "./state.js";
import { EvidenceItem, EvidenceResponse, PromptTrace } from "./types.js";

export interface EvidenceRow {
  dialogueId: string;
  turnIndex: number;
  cue: string;
  role: string | null;
  text: string | null;
  promptId: string | null;
  chain: PromptTrace | null;
  chainComplete: boolean;
}

export interface EvidencePanelModel {
  edgeLabel: string;
  weight: number;
  rows: EvidenceRow[];
  roleBadges: string[];
}

function chainComplete(item: EvidenceItem): boolean {
  return Boolean(
    item.prompt_id &&
      item.trace &&
      item.trace.prompt_id === item.prompt_id &&
      item.trace.template_id &&
      item.trace.statement_refs.some(
        ([dialogueId, turn]) => dialogueId === item.dialogue_id && turn === item.turn_index,
      ),
  );
}

export function evidencePanelModel(response: EvidenceResponse): EvidencePanelModel {
  const rows = response.evidence.map((item) => ({
    dialogueId: item.dialogue_id,
    turnIndex: item.turn_index,
    cue: item.cue,
    role: item.role ?? null,
    text: item.text ?? null,
    promptId: item.prompt_id ?? null,
    chain: item.trace ?? null,
    chainComplete: chainComplete(item),
  }));
  const roleBadges = [...new Set(rows.map((row) => row.role).filter((r): r is string => !!r))].sort();
  return {
    edgeLabel: `${response.subject} -[${response.relation}]-> ${response.object}`,
    weight: response.weight,
    rows,
    roleBadges,
  };
}

export interface ComparisonRow {
  variable: string;
  last: number | null;
  previous: number | null;
}

/** Side-by-side activation vectors of the last two runs, exactly as the
 * server returned them (no recomputation, no rounding). */
export function interventionComparison(
  last: RetainedSimulation | null,
  previous: RetainedSimulation | null,
): ComparisonRow[] {
  const variables = new Set<string>();
  if (last) Object.keys(last.parsed.activations).forEach((v) => variables.add(v));
  if (previous) Object.keys(previous.parsed.activations).forEach((v) => variables.add(v));
  return [...variables].sort().map((variable) => ({
    variable,
    last: last ? (last.parsed.activations[variable] ?? null) : null,
    previous: previous ? (previous.parsed.activations[variable] ?? null) : null,
  }));
}

/** Tint magnitude and sign for a node given the displayed simulation. */
export function activationTint(
  simulation: RetainedSimulation | null,
  nodeId: string,
): { magnitude: number; sign: 1 | 0 | -1 } {
  if (!simulation) return { magnitude: 0, sign: 0 };
  const value = simulation.parsed.activations[nodeId];
  if (value === undefined || value === 0) return { magnitude: 0, sign: 0 };
  return { magnitude: Math.min(1, Math.abs(value)), sign: value > 0 ? 1 : -1 };
}

/** Ordered propagation path list for the trace rendering. */
export function tracePathList(simulation: RetainedSimulation | null): string[] {
  if (!simulation) return [];
  return simulation.parsed.trace.map(
    (step) =>
      `hop ${step.hop}: ${step.subject} -[${step.relation}${
        step.kind === "modulate" ? " x" : ""
      }]-> ${step.object} (${step.value})`,
  );
}
