// Small deterministic force layout: golden-angle seeding plus a fixed number
// of repulsion/spring/centering iterations. No randomness, so the same
// document always lands in the same positions.

import { GraphDocument } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

const GOLDEN_ANGLE = Math.PI * (3 - Math.sqrt(5));

export function seedPositions(nodeIds: string[], radius: number): Map<string, Point> {
  const positions = new Map<string, Point>();
  nodeIds.forEach((id, index) => {
    const r = radius * Math.sqrt((index + 1) / (nodeIds.length + 1));
    const angle = index * GOLDEN_ANGLE;
    positions.set(id, { x: r * Math.cos(angle), y: r * Math.sin(angle) });
  });
  return positions;
}

export interface LayoutOptions {
  width: number;
  height: number;
  iterations?: number;
  springLength?: number;
}

export function forceLayout(doc: GraphDocument, options: LayoutOptions): Map<string, Point> {
  const { width, height } = options;
  const iterations = options.iterations ?? 150;
  const springLength = options.springLength ?? Math.min(width, height) / 6;
  const ids = doc.nodes.map((n) => n.id);
  if (ids.length === 0) return new Map();
  const positions = seedPositions(ids, Math.min(width, height) / 3);
  const links = doc.edges
    .filter((e) => e.subject !== e.object)
    .map((e) => [e.subject, e.object] as const);

  const repulsion = springLength * springLength;
  for (let step = 0; step < iterations; step += 1) {
    const cooling = 1 - step / iterations;
    const force = new Map<string, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));
    for (let i = 0; i < ids.length; i += 1) {
      for (let j = i + 1; j < ids.length; j += 1) {
        const a = positions.get(ids[i]!)!;
        const b = positions.get(ids[j]!)!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let distSq = dx * dx + dy * dy;
        if (distSq < 1e-6) {
          // deterministic tie-break for coincident nodes
          dx = 0.01 * (i - j);
          dy = 0.017 * (i + 1);
          distSq = dx * dx + dy * dy;
        }
        const push = repulsion / distSq;
        const fa = force.get(ids[i]!)!;
        const fb = force.get(ids[j]!)!;
        fa.x += dx * push * 0.01;
        fa.y += dy * push * 0.01;
        fb.x -= dx * push * 0.01;
        fb.y -= dy * push * 0.01;
      }
    }
    for (const [source, target] of links) {
      const a = positions.get(source);
      const b = positions.get(target);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.sqrt(dx * dx + dy * dy) || 1e-3;
      const stretch = (dist - springLength) / dist;
      const fa = force.get(source)!;
      const fb = force.get(target)!;
      fa.x += dx * stretch * 0.05;
      fa.y += dy * stretch * 0.05;
      fb.x -= dx * stretch * 0.05;
      fb.y -= dy * stretch * 0.05;
    }
    for (const id of ids) {
      const p = positions.get(id)!;
      const f = force.get(id)!;
      // mild centering keeps disconnected components on screen
      f.x -= p.x * 0.01;
      f.y -= p.y * 0.01;
      p.x += f.x * cooling;
      p.y += f.y * cooling;
    }
  }

  // normalize into the viewport with a margin
  const xs = ids.map((id) => positions.get(id)!.x);
  const ys = ids.map((id) => positions.get(id)!.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const margin = 40;
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  for (const id of ids) {
    const p = positions.get(id)!;
    p.x = margin + ((p.x - minX) / spanX) * (width - 2 * margin);
    p.y = margin + ((p.y - minY) / spanY) * (height - 2 * margin);
  }
  return positions;
}
