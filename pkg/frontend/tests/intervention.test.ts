import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { activationTint, interventionComparison, tracePathList } from "../src/panels.js";
import { RequestSequencer, initialState, retainSimulation } from "../src/state.js";
import { fixtureGraph, fixtureText, replayFetch } from "./helpers.js";

const RESPONSE_BODY = fixtureText("simulate_response.json");
const REQUEST = JSON.parse(fixtureText("simulate_request.json"));

function clientWithRecordedServer() {
  return new ApiClient(
    "",
    replayFetch({ "POST /api/simulate": RESPONSE_BODY }),
  );
}

describe("intervention display", () => {
  it("retains the server response byte-for-byte", async () => {
    const client = clientWithRecordedServer();
    const raw = await client.simulateRaw(REQUEST);
    expect(raw).toBe(RESPONSE_BODY);

    const doc = fixtureGraph();
    const state = retainSimulation(initialState(doc), raw, 1);
    expect(state.lastSimulation?.raw).toBe(RESPONSE_BODY);
    // the displayed activations are exactly the parse of those bytes
    expect(state.lastSimulation?.parsed.activations).toEqual(
      JSON.parse(RESPONSE_BODY).activations,
    );
  });

  it("tints nodes by the sign and magnitude the server reported", async () => {
    const doc = fixtureGraph();
    const client = clientWithRecordedServer();
    const state = retainSimulation(initialState(doc), await client.simulateRaw(REQUEST), 1);
    const source = activationTint(state.lastSimulation, "policy_gaps");
    expect(source).toEqual({ magnitude: 1, sign: 1 });
    const inhibited = activationTint(state.lastSimulation, "institutional_synergies");
    expect(inhibited).toEqual({ magnitude: 1, sign: -1 });
    const untouched = activationTint(state.lastSimulation, "course_adaptation");
    expect(untouched).toEqual({ magnitude: 0, sign: 0 });
  });

  it("lists the per-edge contribution trace in order", async () => {
    const doc = fixtureGraph();
    const client = clientWithRecordedServer();
    const state = retainSimulation(initialState(doc), await client.simulateRaw(REQUEST), 1);
    const lines = tracePathList(state.lastSimulation);
    const parsed = JSON.parse(RESPONSE_BODY);
    expect(lines).toHaveLength(parsed.trace.length);
    expect(lines[0]).toContain("policy_gaps");
  });

  it("compares the last two runs exactly as returned", async () => {
    const doc = fixtureGraph();
    const client = clientWithRecordedServer();
    const first = await client.simulateRaw(REQUEST);
    let state = retainSimulation(initialState(doc), first, 1);

    const secondBody = JSON.stringify({
      ...JSON.parse(RESPONSE_BODY),
      attenuation: 0.5,
      activations: { ...JSON.parse(RESPONSE_BODY).activations, institutional_synergies: -0.5 },
    });
    state = retainSimulation(state, secondBody, 2);

    const rows = interventionComparison(state.lastSimulation, state.previousSimulation);
    const bySubject = Object.fromEntries(rows.map((row) => [row.variable, row]));
    expect(bySubject["institutional_synergies"]).toEqual({
      variable: "institutional_synergies",
      last: -0.5,
      previous: -1.0,
    });
    expect(bySubject["policy_gaps"]).toEqual({
      variable: "policy_gaps",
      last: 1.0,
      previous: 1.0,
    });
  });

  it("discards stale responses via the request sequencer", () => {
    const sequencer = new RequestSequencer();
    const first = sequencer.begin();
    const second = sequencer.begin();
    expect(sequencer.isCurrent(first)).toBe(false);
    expect(sequencer.isCurrent(second)).toBe(true);
  });

  it("surfaces 422 rejections with the server's error record", async () => {
    const client = new ApiClient(
      "",
      replayFetch({
        "POST /api/simulate": {
          status: 422,
          body: JSON.stringify({ detail: { stage: "simulate", message: "unknown intervention source 'x'", offending_id: "x" } }),
        },
      }),
    );
    await expect(client.simulateRaw({ source: "x", value: 1, hops: 1, lambda: 1 }))
      .rejects.toThrowError(ApiError);
    try {
      await client.simulateRaw({ source: "x", value: 1, hops: 1, lambda: 1 });
    } catch (error) {
      const apiError = error as ApiError;
      expect(apiError.status).toBe(422);
      expect(JSON.parse(apiError.body).detail.offending_id).toBe("x");
    }
  });
});
