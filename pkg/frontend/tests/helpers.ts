import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import type { GraphDocument } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixtureText(name: string): string {
  return readFileSync(join(here, "fixtures", name), "utf-8");
}

export function fixtureGraph(): GraphDocument {
  return JSON.parse(fixtureText("graph.json"));
}

export function fixtureEvidence(): Record<string, unknown> {
  return JSON.parse(fixtureText("evidence_responses.json"));
}

/** A fetch stub that replays recorded server bodies byte-for-byte. */
export function replayFetch(routes: Record<string, string | { status: number; body: string }>): FetchLike {
  return async (url: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    const key = `${method} ${url}`;
    const route = routes[key] ?? routes[url];
    if (route === undefined) {
      return new Response(JSON.stringify({ detail: `no route ${key}` }), { status: 404 });
    }
    if (typeof route === "string") {
      return new Response(route, { status: 200, headers: { "Content-Type": "application/json" } });
    }
    return new Response(route.body, { status: route.status });
  };
}
