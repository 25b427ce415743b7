// Explorer entry point: loads the graph, wires controls, keeps the scene in
// sync with the view state. All numbers shown come from the server verbatim.

import { ApiClient, ApiError } from "./api.js";
import { forceLayout } from "./layout.js";
import {
  evidencePanelModel,
  interventionComparison,
  tracePathList,
} from "./panels.js";
import { renderScene } from "./render.js";
import {
  RequestSequencer,
  ViewState,
  initialState,
  resetView,
  retainSimulation,
} from "./state.js";
import { GraphDocument, GraphEdge, RELATION_TYPES } from "./types.js";

const api = new ApiClient("");
const sequencer = new RequestSequencer();

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

function showError(message: string, retry?: () => void): void {
  const panel = byId<HTMLDivElement>("error-panel");
  panel.textContent = message;
  panel.style.display = "block";
  if (retry) {
    const button = document.createElement("button");
    button.textContent = "retry";
    button.addEventListener("click", () => {
      panel.style.display = "none";
      retry();
    });
    panel.appendChild(button);
  }
}

function clearError(): void {
  byId<HTMLDivElement>("error-panel").style.display = "none";
}

async function boot(): Promise<void> {
  let doc: GraphDocument;
  try {
    doc = await api.graph();
  } catch (error) {
    showError(`could not load graph: ${error}`, () => void boot());
    return;
  }
  if (doc.nodes.length === 0) {
    byId<HTMLDivElement>("empty-state").style.display = "block";
    return;
  }
  let state = initialState(doc);
  const svg = byId<SVGSVGElement & HTMLElement>("scene") as unknown as SVGSVGElement;
  const positions = forceLayout(doc, { width: 900, height: 620 });

  const roleSelect = byId<HTMLSelectElement>("role-filter");
  const roles = [...new Set(doc.nodes.flatMap((n) => n.roles))].sort();
  for (const role of roles) {
    const option = document.createElement("option");
    option.value = role;
    option.textContent = role;
    roleSelect.appendChild(option);
  }

  const relationBox = byId<HTMLDivElement>("relation-filter");
  for (const relation of RELATION_TYPES) {
    const label = document.createElement("label");
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.checked = true;
    checkbox.dataset.relation = relation;
    checkbox.addEventListener("change", () => {
      if (checkbox.checked) state.relationFilter.add(relation);
      else state.relationFilter.delete(relation);
      redraw();
    });
    label.appendChild(checkbox);
    label.append(` ${relation}`);
    relationBox.appendChild(label);
  }

  const slider = byId<HTMLInputElement>("time-slider");
  slider.max = String(state.sliderMax);
  slider.value = String(state.sliderPosition);
  const sliderLabel = byId<HTMLSpanElement>("slider-label");

  const sourceSelect = byId<HTMLSelectElement>("simulate-source");
  for (const node of doc.nodes) {
    const option = document.createElement("option");
    option.value = node.id;
    option.textContent = node.id;
    sourceSelect.appendChild(option);
  }

  function redraw(): void {
    sliderLabel.textContent = `turn <= ${state.sliderPosition}`;
    renderScene(svg, doc, state, positions, {
      onNodeClick: (nodeId) => {
        state.selectedNode = nodeId;
        state.selectedEdge = null;
        state.intervention.source = nodeId;
        sourceSelect.value = nodeId;
        byId<HTMLDivElement>("evidence-panel").innerHTML =
          `<h3>${nodeId}</h3><p>select an edge for its evidence</p>`;
        redraw();
      },
      onEdgeClick: (edge) => void inspectEvidence(edge),
      onBackgroundClick: () => {
        state.selectedNode = null;
        state.selectedEdge = null;
        byId<HTMLDivElement>("evidence-panel").innerHTML = "";
        redraw();
      },
    });
  }

  async function inspectEvidence(edge: GraphEdge): Promise<void> {
    state.selectedEdge = `${edge.subject}|${edge.relation}|${edge.object}`;
    state.selectedNode = null;
    const panel = byId<HTMLDivElement>("evidence-panel");
    try {
      const response = await api.evidence(edge.subject, edge.relation, edge.object);
      const model = evidencePanelModel(response);
      panel.innerHTML = "";
      const heading = document.createElement("h3");
      heading.textContent = `${model.edgeLabel} (w=${model.weight})`;
      panel.appendChild(heading);
      const badges = document.createElement("p");
      badges.className = "badges";
      badges.textContent = model.roleBadges.map((r) => `[${r}]`).join(" ");
      panel.appendChild(badges);
      for (const row of model.rows) {
        const item = document.createElement("div");
        item.className = "evidence-item";
        const quote = document.createElement("blockquote");
        quote.textContent = row.text ?? "(text unavailable)";
        item.appendChild(quote);
        const meta = document.createElement("p");
        meta.textContent =
          `${row.role ?? "?"} @ ${row.dialogueId}#${row.turnIndex}, cue "${row.cue}"`;
        item.appendChild(meta);
        const chain = document.createElement("p");
        chain.className = row.chainComplete ? "chain ok" : "chain broken";
        chain.textContent = row.chainComplete && row.chain
          ? `chain: ${row.promptId?.slice(0, 12)} -> ${row.chain.template_id} -> ` +
            `[${row.chain.variable_targets.join(", ")}] (${row.chain.theme} / ${row.chain.scenario})`
          : "trace chain incomplete";
        item.appendChild(chain);
        panel.appendChild(item);
      }
      redraw();
    } catch (error) {
      showError(`evidence fetch failed: ${error}`, () => void inspectEvidence(edge));
    }
  }

  roleSelect.addEventListener("change", () => {
    state.roleFilter = roleSelect.value || null;
    redraw();
  });

  slider.addEventListener("input", () => {
    state.sliderPosition = Number(slider.value);
    redraw();
  });

  byId<HTMLButtonElement>("reset-view").addEventListener("click", () => {
    state = resetView(state, doc);
    roleSelect.value = "";
    slider.value = String(state.sliderPosition);
    relationBox.querySelectorAll("input").forEach((box) => ((box as HTMLInputElement).checked = true));
    redraw();
  });

  byId<HTMLButtonElement>("run-simulation").addEventListener("click", () => {
    void runSimulation();
  });

  async function runSimulation(): Promise<void> {
    const source = sourceSelect.value;
    if (!source) {
      showError("pick an intervention source first");
      return;
    }
    clearError();
    const request = {
      source,
      value: Number(byId<HTMLInputElement>("simulate-value").value),
      hops: Number(byId<HTMLInputElement>("simulate-hops").value),
      lambda: Number(byId<HTMLInputElement>("simulate-lambda").value),
    };
    const token = sequencer.begin();
    try {
      const raw = await api.simulateRaw(request);
      if (!sequencer.isCurrent(token)) return; // stale response discarded
      state = retainSimulation(state, raw, token);
      renderComparison();
      redraw();
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        showError(`simulation rejected: ${error.body}`);
      } else {
        showError(`simulation failed: ${error}`);
      }
    }
  }

  function renderComparison(): void {
    const rows = interventionComparison(state.lastSimulation, state.previousSimulation);
    const table = byId<HTMLTableElement>("comparison-table");
    table.innerHTML = "<tr><th>variable</th><th>last</th><th>previous</th></tr>";
    for (const row of rows) {
      const tr = document.createElement("tr");
      tr.innerHTML =
        `<td>${row.variable}</td><td>${row.last ?? ""}</td><td>${row.previous ?? ""}</td>`;
      table.appendChild(tr);
    }
    const trace = byId<HTMLOListElement>("trace-list");
    trace.innerHTML = "";
    for (const line of tracePathList(state.lastSimulation)) {
      const li = document.createElement("li");
      li.textContent = line;
      trace.appendChild(li);
    }
  }

  redraw();
}

void boot();
