import { describe, expect, it } from "vitest";

import { forceLayout, seedPositions } from "../src/layout.js";
import { fixtureGraph } from "./helpers.js";

describe("force layout", () => {
  it("positions every node inside the viewport", () => {
    const doc = fixtureGraph();
    const positions = forceLayout(doc, { width: 900, height: 620 });
    expect(positions.size).toBe(doc.nodes.length);
    for (const point of positions.values()) {
      expect(point.x).toBeGreaterThanOrEqual(0);
      expect(point.x).toBeLessThanOrEqual(900);
      expect(point.y).toBeGreaterThanOrEqual(0);
      expect(point.y).toBeLessThanOrEqual(620);
      expect(Number.isFinite(point.x)).toBe(true);
      expect(Number.isFinite(point.y)).toBe(true);
    }
  });

  it("is deterministic for the same document", () => {
    const doc = fixtureGraph();
    const first = forceLayout(doc, { width: 900, height: 620 });
    const second = forceLayout(doc, { width: 900, height: 620 });
    expect([...first.entries()]).toEqual([...second.entries()]);
  });

  it("separates coincident seeds", () => {
    const positions = seedPositions(["a", "b", "c"], 100);
    const keys = [...positions.values()].map((p) => `${p.x.toFixed(3)},${p.y.toFixed(3)}`);
    expect(new Set(keys).size).toBe(3);
  });

  it("handles an empty document", () => {
    expect(forceLayout({ nodes: [], edges: [] }, { width: 100, height: 100 }).size).toBe(0);
  });
});
