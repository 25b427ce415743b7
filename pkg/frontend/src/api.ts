// Thin client over the stakegraph HTTP API. The fetch implementation is
// injectable so tests can replay recorded server bodies byte-for-byte.

import {
  EvidenceResponse,
  GraphDocument,
  SimulateRequest,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: string,
  ) {
    super(`API error ${status}: ${body}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get(path: string): Promise<string> {
    const response = await this.fetchImpl(this.baseUrl + path);
    const body = await response.text();
    if (!response.ok) throw new ApiError(response.status, body);
    return body;
  }

  async graph(): Promise<GraphDocument> {
    return JSON.parse(await this.get("/api/graph"));
  }

  async quality(): Promise<unknown> {
    return JSON.parse(await this.get("/api/quality"));
  }

  async cycles(): Promise<{ cycles: string[][] }> {
    return JSON.parse(await this.get("/api/cycles"));
  }

  async dialogue(dialogueId: string): Promise<unknown> {
    return JSON.parse(await this.get(`/api/corpus/${encodeURIComponent(dialogueId)}`));
  }

  async evidence(subject: string, relation: string, object: string): Promise<EvidenceResponse> {
    const query = new URLSearchParams({ subject, relation, object });
    return JSON.parse(await this.get(`/api/evidence?${query.toString()}`));
  }

  /** Returns the raw response body alongside the parse, so callers can keep
   * the server's bytes as the single source of truth for display. */
  async simulateRaw(request: SimulateRequest): Promise<string> {
    const response = await this.fetchImpl(this.baseUrl + "/api/simulate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    const body = await response.text();
    if (!response.ok) throw new ApiError(response.status, body);
    return body;
  }
}
