import { readFileSync } from "node:fs";
import { join } from "node:path";
import type { ChatResult, PlanSuggestion, SubmitResult, ViewModel } from "../src/types.js";
import type { ServiceApi } from "../src/api.js";

export function fixture<T>(name: string): T {
  const path = join(process.cwd(), "test", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}

export function loadView(name: string): ViewModel {
  return fixture<ViewModel>(name);
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

export interface RecordedCall {
  method: string;
  args: unknown[];
}

/** In-memory stand-in for the HTTP client, driven by recorded fixtures. */
export class FakeApi implements ServiceApi {
  calls: RecordedCall[] = [];
  viewDoc: ViewModel;
  failNext: Error | null = null;
  hintReply = fixture<ChatResult>("quiz_hint_response.json").reply;
  chatReply = fixture<ChatResult>("chat_response.json").reply;

  constructor(view: ViewModel) {
    this.viewDoc = structuredClone(view);
  }

  private step(method: string, args: unknown[]): void {
    this.calls.push({ method, args });
    if (this.failNext) {
      const error = this.failNext;
      this.failNext = null;
      throw error;
    }
  }

  async packs(): Promise<string[]> {
    this.step("packs", []);
    return fixture<{ packs: string[] }>("launch_packs.json").packs;
  }

  async openSession(packId: string, condition: string): Promise<string> {
    this.step("openSession", [packId, condition]);
    return "fake-session";
  }

  async view(sessionId: string): Promise<ViewModel> {
    this.step("view", [sessionId]);
    return structuredClone(this.viewDoc);
  }

  async advance(sessionId: string): Promise<unknown> {
    this.step("advance", [sessionId]);
    return { stage: this.viewDoc.stage };
  }

  async plan(sessionId: string, body: Record<string, unknown>): Promise<Record<string, unknown>> {
    this.step("plan", [sessionId, body]);
    return { recorded: true };
  }

  async suggestPlan(sessionId: string): Promise<PlanSuggestion> {
    this.step("suggestPlan", [sessionId]);
    return fixture<PlanSuggestion>("plan_suggest_response.json");
  }

  async start(sessionId: string, subtaskId: string): Promise<unknown> {
    this.step("start", [sessionId, subtaskId]);
    return { subtask_id: subtaskId, status: "in_progress" };
  }

  async submit(
    sessionId: string,
    subtaskId: string,
    body: Record<string, unknown>,
  ): Promise<SubmitResult> {
    this.step("submit", [sessionId, subtaskId, body]);
    return fixture<SubmitResult>("submit_failed_response.json");
  }

  async chat(sessionId: string, body: Record<string, unknown>): Promise<ChatResult> {
    this.step("chat", [sessionId, body]);
    if (body.interaction === "quiz_help") {
      return { reply: this.hintReply, channel: `subtask:${body.subtask_id}` };
    }
    const channel = `subtask:${body.subtask_id}`;
    const turns = this.viewDoc.transcripts[channel] ?? [];
    this.viewDoc.transcripts[channel] = [
      ...turns,
      { role: "user", text: String(body.text ?? "") },
      { role: "assistant", text: this.chatReply },
    ];
    return { reply: this.chatReply, channel, chat_turns: 1 };
  }

  async tick(sessionId: string, seconds: number, active: string | null): Promise<unknown> {
    this.step("tick", [sessionId, seconds, active]);
    return { clock: this.viewDoc.clock + seconds };
  }
}
