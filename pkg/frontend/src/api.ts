/** Typed client for the /api/v1 endpoints. All cryptography happens on
 * the server; this module only moves JSON. */

export interface Correction {
  position: number;
  kind: "keystream" | "combine";
  delta: number;
}

export interface SessionView {
  id: string;
  scheme: string;
  ciphertext: string;
  masked_seed_len: number | null;
  derived: string;
  fitness: number[];
  corrections: Correction[];
  suspect: number | null;
  key_digest: string;
  created: string;
}

export interface Candidate {
  kind: string;
  delta: number;
  score: number;
  preview: string;
  position?: number;
}

export interface SuggestResponse {
  position: number;
  baseline: number;
  window_preview: string;
  candidates: Candidate[];
}

export interface AutoSuggestResponse {
  suspect: number | null;
  candidates: Candidate[];
}

export interface TraceStop {
  row: number;
  col: number;
  letter: string;
  edge: string | null;
}

export interface TraceResponse {
  result: string;
  stops: TraceStop[];
}

export interface TabulaGrid {
  top: string[];
  left: string[];
  bottom_right: string[];
  grid: string[][];
}

export interface SessionDocument {
  version: number;
  scheme: string;
  ciphertext: string;
  masked_seed_len?: number;
  offset?: number;
  key_digest: string;
  corrections: Correction[];
  created: string;
  updated: string;
}

export class ApiError extends Error {
  constructor(public code: string, message: string, public status: number) {
    super(message);
  }
}

export interface CreateSessionBody {
  scheme: string;
  ciphertext: string;
  masked_seed_len?: number;
  keyfile?: string;
  keys?: Record<string, string | number>;
}

async function asJson<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(
      body.code ?? "error",
      body.message ?? response.statusText,
      response.status,
    );
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchImpl: typeof fetch = fetch,
  ) {}

  private request<T>(method: string, path: string, body?: unknown): Promise<T> {
    return this.fetchImpl(this.base + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((r) => asJson<T>(r));
  }

  createSession(body: CreateSessionBody): Promise<SessionView> {
    return this.request("POST", "/api/v1/recovery/sessions", body);
  }

  getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/api/v1/recovery/sessions/${id}`);
  }

  deleteSession(id: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/api/v1/recovery/sessions/${id}`);
  }

  addCorrection(id: string, correction: Correction): Promise<SessionView> {
    return this.request("POST", `/api/v1/recovery/sessions/${id}/corrections`, correction);
  }

  removeCorrection(id: string, position: number): Promise<SessionView> {
    return this.request("DELETE", `/api/v1/recovery/sessions/${id}/corrections/${position}`);
  }

  suggest(id: string, position: number): Promise<SuggestResponse> {
    return this.request("POST", `/api/v1/recovery/sessions/${id}/suggestions`, { position });
  }

  autoSuggest(id: string): Promise<AutoSuggestResponse> {
    return this.request("POST", `/api/v1/recovery/sessions/${id}/auto-suggest`);
  }

  saveSession(id: string, path?: string): Promise<SessionDocument> {
    return this.request("POST", `/api/v1/recovery/sessions/${id}/save`, path ? { path } : {});
  }

  tabula(params: { top?: string; left?: string; bottom_right?: string }): Promise<TabulaGrid> {
    const query = new URLSearchParams(
      Object.entries(params).filter(([, v]) => v) as [string, string][],
    ).toString();
    return this.request("GET", `/api/v1/tabula${query ? "?" + query : ""}`);
  }

  trace(body: {
    op: string;
    inputs: string;
    entry?: string;
    top?: string;
    left?: string;
    bottom_right?: string;
  }): Promise<TraceResponse> {
    return this.request("POST", "/api/v1/tabula/trace", body);
  }
}
