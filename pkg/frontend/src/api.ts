// The only module that talks to the network: one method per documented
// endpoint, one request per call, no retries, no caching. Anything the UI
// shows comes back through here unmodified.

import type {
  CodePayload,
  ExamplePayload,
  FillChoice,
  PatternsPayload,
  SessionPayload,
  WireError,
} from "./wire.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
    this.name = "ServiceError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    const payload = await response.json();
    if (!response.ok) {
      const err = payload as Partial<WireError>;
      throw new ServiceError(
        response.status,
        err.error ?? `HTTP ${response.status}`,
        err.detail ?? JSON.stringify(payload),
      );
    }
    return payload as T;
  }

  private sessionPath(id: string, suffix: string, examples?: number): string {
    const query = examples === undefined ? "" : `?examples=${examples}`;
    return `/sessions/${encodeURIComponent(id)}${suffix}${query}`;
  }

  openSession(
    patternId: string,
    context: [string, string][],
    seed: number,
    examples?: number,
  ): Promise<SessionPayload> {
    const query = examples === undefined ? "" : `?examples=${examples}`;
    return this.request("POST", `/sessions${query}`, {
      pattern_id: patternId,
      context,
      seed,
    });
  }

  getSession(id: string, examples?: number): Promise<SessionPayload> {
    return this.request("GET", this.sessionPath(id, "", examples));
  }

  fill(
    id: string,
    groupId: string,
    choice: FillChoice,
    examples?: number,
  ): Promise<SessionPayload> {
    return this.request("POST", this.sessionPath(id, "/fill", examples), {
      group_id: groupId,
      choice,
    });
  }

  undo(id: string, examples?: number): Promise<SessionPayload> {
    return this.request("POST", this.sessionPath(id, "/undo", examples));
  }

  getCode(id: string): Promise<CodePayload> {
    return this.request("GET", this.sessionPath(id, "/code"));
  }

  listPatterns(): Promise<PatternsPayload> {
    return this.request("GET", "/patterns");
  }

  getExample(id: string): Promise<ExamplePayload> {
    return this.request("GET", `/examples/${encodeURIComponent(id)}`);
  }
}
