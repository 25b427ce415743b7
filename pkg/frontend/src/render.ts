// SVG scene rendering. This layer is deliberately thin: all decisions about
// what is visible, dimmed, or tinted come from state.ts / panels.ts.

import { Point } from "./layout.js";
import { RetainedSimulation, RoleEmphasis, ViewState, visibleEdges, roleEmphasis } from "./state.js";
import { activationTint } from "./panels.js";
import { EdgeKey, GraphDocument, GraphEdge, edgeKey } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const DIMENSION_COLORS: Record<string, string> = {
  Skill: "#2d7dd2",
  Institutional: "#e8a33d",
  Emotion: "#d25c5c",
};

const RELATION_DASH: Record<string, string> = {
  Causal: "",
  Dependency: "6 3",
  Modulation: "2 4",
  Reinforcement: "10 2",
  Inhibition: "4 4",
};

export interface SceneCallbacks {
  onNodeClick?: (nodeId: string) => void;
  onEdgeClick?: (edge: GraphEdge) => void;
  onBackgroundClick?: () => void;
}

function nodeRadius(evidenceCount: number): number {
  return 8 + 3 * Math.sqrt(evidenceCount);
}

export function renderScene(
  svg: SVGSVGElement,
  doc: GraphDocument,
  state: ViewState,
  positions: Map<string, Point>,
  callbacks: SceneCallbacks = {},
): void {
  svg.innerHTML = "";
  const emphasis: RoleEmphasis = roleEmphasis(doc, state);
  const simulation: RetainedSimulation | null = state.lastSimulation;

  const background = document.createElementNS(SVG_NS, "rect");
  background.setAttribute("width", "100%");
  background.setAttribute("height", "100%");
  background.setAttribute("fill", "transparent");
  background.addEventListener("click", () => callbacks.onBackgroundClick?.());
  svg.appendChild(background);

  const edgeGroup = document.createElementNS(SVG_NS, "g");
  for (const edge of visibleEdges(doc, state)) {
    const from = positions.get(edge.subject);
    const to = positions.get(edge.object);
    if (!from || !to) continue;
    const key: EdgeKey = edgeKey(edge);
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    line.setAttribute("stroke", edge.relation === "Inhibition" ? "#b03030" : "#5b6472");
    line.setAttribute("stroke-width", String(1 + Math.log1p(edge.weight)));
    const dash = RELATION_DASH[edge.relation] ?? "";
    if (dash) line.setAttribute("stroke-dasharray", dash);
    const dim = emphasis.dimmed && !emphasis.opaqueEdges.has(key);
    line.setAttribute("opacity", dim ? "0.15" : "0.85");
    if (state.selectedEdge === key) line.setAttribute("stroke-width", "4");
    line.classList.add("edge");
    line.dataset.key = key;
    line.addEventListener("click", (event) => {
      event.stopPropagation();
      callbacks.onEdgeClick?.(edge);
    });
    edgeGroup.appendChild(line);
  }
  svg.appendChild(edgeGroup);

  const nodeGroup = document.createElementNS(SVG_NS, "g");
  for (const node of doc.nodes) {
    const position = positions.get(node.id);
    if (!position) continue;
    const group = document.createElementNS(SVG_NS, "g");
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(position.x));
    circle.setAttribute("cy", String(position.y));
    circle.setAttribute("r", String(nodeRadius(node.evidence_count)));
    circle.setAttribute("fill", DIMENSION_COLORS[node.dimension ?? ""] ?? "#7e8a97");
    const tint = activationTint(simulation, node.id);
    if (tint.sign !== 0) {
      circle.setAttribute("stroke", tint.sign > 0 ? "#1d9e48" : "#c22121");
      circle.setAttribute("stroke-width", String(2 + 4 * tint.magnitude));
    } else if (state.selectedNode === node.id) {
      circle.setAttribute("stroke", "#111");
      circle.setAttribute("stroke-width", "3");
    }
    const dim = emphasis.dimmed && !emphasis.opaqueNodes.has(node.id);
    group.setAttribute("opacity", dim ? "0.25" : "1");
    group.classList.add("node");
    group.dataset.id = node.id;
    group.addEventListener("click", (event) => {
      event.stopPropagation();
      callbacks.onNodeClick?.(node.id);
    });

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(position.x));
    label.setAttribute("y", String(position.y - nodeRadius(node.evidence_count) - 4));
    label.setAttribute("text-anchor", "middle");
    label.setAttribute("class", "node-label");
    label.textContent = node.id;

    group.appendChild(circle);
    group.appendChild(label);
    nodeGroup.appendChild(group);
  }
  svg.appendChild(nodeGroup);
}
