import type { ChatResult, PlanSuggestion, SubmitResult, ViewModel } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public error: string,
    public detail: string,
  ) {
    super(`${error}: ${detail}`);
  }
}

/** The documented HTTP surface; every request the client makes goes through here. */
export interface ServiceApi {
  packs(): Promise<string[]>;
  openSession(packId: string, condition: string): Promise<string>;
  view(sessionId: string): Promise<ViewModel>;
  advance(sessionId: string): Promise<unknown>;
  plan(sessionId: string, body: Record<string, unknown>): Promise<Record<string, unknown>>;
  suggestPlan(sessionId: string): Promise<PlanSuggestion>;
  start(sessionId: string, subtaskId: string): Promise<unknown>;
  submit(sessionId: string, subtaskId: string, body: Record<string, unknown>): Promise<SubmitResult>;
  chat(sessionId: string, body: Record<string, unknown>): Promise<ChatResult>;
  tick(sessionId: string, seconds: number, active: string | null): Promise<unknown>;
}

export class HttpApi implements ServiceApi {
  constructor(private base = "") {}

  private async request(method: string, path: string, body?: unknown): Promise<any> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.base + path, init);
    if (!response.ok) {
      let error = `HTTP ${response.status}`;
      let detail = "";
      try {
        const doc = await response.json();
        error = doc.error ?? error;
        detail = doc.detail ?? "";
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, error, detail);
    }
    return response.json();
  }

  async packs(): Promise<string[]> {
    const doc = await this.request("GET", "/packs");
    return doc.packs;
  }

  async openSession(packId: string, condition: string): Promise<string> {
    const doc = await this.request("POST", "/sessions", {
      pack_id: packId,
      condition,
    });
    return doc.session_id;
  }

  view(sessionId: string): Promise<ViewModel> {
    return this.request("GET", `/sessions/${sessionId}/view`);
  }

  advance(sessionId: string): Promise<unknown> {
    return this.request("POST", `/sessions/${sessionId}/advance`);
  }

  plan(sessionId: string, body: Record<string, unknown>): Promise<Record<string, unknown>> {
    return this.request("POST", `/sessions/${sessionId}/plan`, { action: "record", ...body });
  }

  suggestPlan(sessionId: string): Promise<PlanSuggestion> {
    return this.request("POST", `/sessions/${sessionId}/plan`, { action: "suggest" });
  }

  start(sessionId: string, subtaskId: string): Promise<unknown> {
    return this.request("POST", `/sessions/${sessionId}/subtasks/${subtaskId}/start`);
  }

  submit(sessionId: string, subtaskId: string, body: Record<string, unknown>): Promise<SubmitResult> {
    return this.request("POST", `/sessions/${sessionId}/subtasks/${subtaskId}/submit`, body);
  }

  chat(sessionId: string, body: Record<string, unknown>): Promise<ChatResult> {
    return this.request("POST", `/sessions/${sessionId}/chat`, body);
  }

  tick(sessionId: string, seconds: number, active: string | null): Promise<unknown> {
    return this.request("POST", `/sessions/${sessionId}/tick`, {
      seconds,
      active_subtask: active,
    });
  }
}
