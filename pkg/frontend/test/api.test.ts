import { afterEach, describe, expect, it } from "vitest";
import { ApiError, HttpApi } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  body: unknown;
}

const realFetch = globalThis.fetch;

function stubFetch(status = 200, payload: unknown = {}): Recorded[] {
  const recorded: Recorded[] = [];
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    recorded.push({
      url: String(input),
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    });
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return recorded;
}

afterEach(() => {
  globalThis.fetch = realFetch;
});

describe("endpoint contract", () => {
  it("hits the documented paths with the documented bodies", async () => {
    const recorded = stubFetch(200, { packs: [], session_id: "s", suggestion: [] });
    const api = new HttpApi("");
    await api.packs();
    await api.openSession("llm-agents-101", "full_srl");
    await api.view("s1");
    await api.advance("s1");
    await api.plan("s1", { ordering: ["a"] });
    await api.suggestPlan("s1");
    await api.start("s1", "st-x");
    await api.submit("s1", "st-x", { answers: {} });
    await api.chat("s1", { interaction: "discussion_message", text: "hi" });
    await api.tick("s1", 30, "st-x");

    const seen = recorded.map((r) => `${r.method} ${r.url}`);
    expect(seen).toEqual([
      "GET /packs",
      "POST /sessions",
      "GET /sessions/s1/view",
      "POST /sessions/s1/advance",
      "POST /sessions/s1/plan",
      "POST /sessions/s1/plan",
      "POST /sessions/s1/subtasks/st-x/start",
      "POST /sessions/s1/subtasks/st-x/submit",
      "POST /sessions/s1/chat",
      "POST /sessions/s1/tick",
    ]);

    expect(recorded[1].body).toEqual({ pack_id: "llm-agents-101", condition: "full_srl" });
    expect(recorded[4].body).toEqual({ action: "record", ordering: ["a"] });
    expect(recorded[5].body).toEqual({ action: "suggest" });
    expect(recorded[9].body).toEqual({ seconds: 30, active_subtask: "st-x" });
  });

  it("raises a typed error from the service error envelope", async () => {
    stubFetch(409, { error: "StageGateError", detail: "record a plan first" });
    const api = new HttpApi("");
    const failure = await api.advance("s1").catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(409);
    expect(failure.error).toBe("StageGateError");
    expect(failure.detail).toBe("record a plan first");
  });

  it("prefixes every path with the configured base", async () => {
    const recorded = stubFetch(200, {});
    const api = new HttpApi("http://testserver");
    await api.view("abc");
    expect(recorded[0].url).toBe("http://testserver/sessions/abc/view");
  });
});
