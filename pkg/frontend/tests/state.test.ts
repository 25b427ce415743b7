import { describe, expect, it } from "vitest";

import {
  earliestEvidenceTurn,
  edgesAtSlider,
  initialState,
  maxEvidenceTurn,
  resetView,
  roleEmphasis,
  sceneFrom,
  visibleEdges,
} from "../src/state.js";
import { edgeKey } from "../src/types.js";
import { fixtureGraph } from "./helpers.js";

describe("scene completeness", () => {
  it("renders every node and edge of the fixture export", () => {
    const doc = fixtureGraph();
    const state = initialState(doc);
    const scene = sceneFrom(doc, state);
    expect(new Set(scene.nodeIds)).toEqual(new Set(doc.nodes.map((n) => n.id)));
    expect(new Set(scene.edgeKeys)).toEqual(new Set(doc.edges.map(edgeKey)));
    expect(scene.nodeIds).toHaveLength(15);
    expect(scene.edgeKeys).toHaveLength(8);
  });

  it("shows the empty state for an empty document", () => {
    const doc = { nodes: [], edges: [] };
    const scene = sceneFrom(doc, initialState(doc));
    expect(scene.nodeIds).toHaveLength(0);
    expect(scene.edgeKeys).toHaveLength(0);
  });
});

describe("timeline slider", () => {
  it("at maximum shows the full edge set", () => {
    const doc = fixtureGraph();
    const max = maxEvidenceTurn(doc);
    expect(edgesAtSlider(doc, max)).toHaveLength(doc.edges.length);
  });

  it("at zero shows exactly the edges first evidenced at turn 0", () => {
    const doc = fixtureGraph();
    const expected = doc.edges
      .filter((edge) => earliestEvidenceTurn(edge) === 0)
      .map(edgeKey)
      .sort();
    expect(expected.length).toBeGreaterThan(0);
    expect(expected.length).toBeLessThan(doc.edges.length);
    const shown = edgesAtSlider(doc, 0).map(edgeKey).sort();
    expect(shown).toEqual(expected);
  });

  it("mid positions match a hand filter over the evidence indexes", () => {
    const doc = fixtureGraph();
    for (let position = 0; position <= maxEvidenceTurn(doc); position += 1) {
      const byHand = doc.edges
        .filter((edge) => Math.min(...edge.evidence.map((e) => e.turn_index)) <= position)
        .map(edgeKey)
        .sort();
      expect(edgesAtSlider(doc, position).map(edgeKey).sort()).toEqual(byHand);
    }
  });

  it("keeps evidence-free edges always visible", () => {
    const doc = {
      nodes: [
        { id: "a", dimension: null, roles: [], evidence_count: 0 },
        { id: "b", dimension: null, roles: [], evidence_count: 0 },
      ],
      edges: [{ subject: "a", relation: "Causal", object: "b", weight: 1, evidence: [] }],
    };
    expect(edgesAtSlider(doc, 0)).toHaveLength(1);
  });
});

describe("relation and role filters", () => {
  it("relation filter hides edges of unchecked types only", () => {
    const doc = fixtureGraph();
    const state = initialState(doc);
    state.relationFilter.delete("Inhibition");
    const shown = visibleEdges(doc, state);
    expect(shown.every((edge) => edge.relation !== "Inhibition")).toBe(true);
    const inhibitionCount = doc.edges.filter((e) => e.relation === "Inhibition").length;
    expect(shown).toHaveLength(doc.edges.length - inhibitionCount);
  });

  it("role focus keeps exactly the edges with that role's evidence opaque", () => {
    const doc = fixtureGraph();
    const state = initialState(doc);
    state.roleFilter = "Student";
    const emphasis = roleEmphasis(doc, state);
    const expected = doc.edges
      .filter((edge) => edge.evidence.some((item) => item.role === "Student"))
      .map(edgeKey)
      .sort();
    expect(expected.length).toBeGreaterThan(0);
    expect([...emphasis.opaqueEdges].sort()).toEqual(expected);
    expect(emphasis.dimmed).toBe(true);
  });

  it("no role filter leaves everything opaque", () => {
    const doc = fixtureGraph();
    const emphasis = roleEmphasis(doc, initialState(doc));
    expect(emphasis.dimmed).toBe(false);
    expect(emphasis.opaqueEdges.size).toBe(doc.edges.length);
  });
});

describe("filters are lossless", () => {
  it("resetting the view restores the initial scene", () => {
    const doc = fixtureGraph();
    const initial = initialState(doc);
    const initialScene = sceneFrom(doc, initial);

    let state = initialState(doc);
    state.roleFilter = "University";
    state.relationFilter.delete("Causal");
    state.relationFilter.delete("Reinforcement");
    state.sliderPosition = 0;
    state.selectedNode = "policy_gaps";
    expect(sceneFrom(doc, state).edgeKeys.length).toBeLessThan(initialScene.edgeKeys.length);

    state = resetView(state, doc);
    const restored = sceneFrom(doc, state);
    expect(restored).toEqual(initialScene);
    expect(state.roleFilter).toBeNull();
    expect(state.selectedNode).toBeNull();
  });
});
