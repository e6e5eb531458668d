import { beforeEach, describe, expect, it } from "vitest";
import { ApiError } from "../src/api.js";
import { AppController } from "../src/app.js";
import { FakeApi, flush, loadView } from "./helpers.js";

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "<div id='app'></div>";
  root = document.getElementById("app") as HTMLElement;
});

async function controllerFor(viewFixture: string): Promise<{ api: FakeApi; app: AppController }> {
  const api = new FakeApi(loadView(viewFixture));
  const app = new AppController(api, root, api.viewDoc.session_id);
  await app.refresh();
  return { api, app };
}

describe("quiz help flow", () => {
  it("asks for a hint and shows the reply under the quiz", async () => {
    const { api, app } = await controllerFor("full_task_view.json");
    await app.handlers().onHint("st-concept-quiz", "q-mc");
    const chatCall = api.calls.find((c) => c.method === "chat");
    expect(chatCall).toBeDefined();
    expect((chatCall!.args[1] as Record<string, unknown>).interaction).toBe("quiz_help");
    const panel = root.querySelector("[data-hint-panel='st-concept-quiz']");
    expect(panel?.textContent).toBe(api.hintReply);
    const words = api.hintReply.split(/\s+/).filter(Boolean);
    expect(words.length).toBeLessThanOrEqual(20);
  });

  it("keeps the quiz answer drafts when a submission is rejected", async () => {
    const { api, app } = await controllerFor("full_task_view.json");
    const handlers = app.handlers();
    handlers.onQuizAnswer("st-concept-quiz", "q-mc", 2);
    handlers.onQuizAnswer("st-concept-quiz", "q-tf", true);
    api.failNext = new ApiError(409, "NotAvailableError", "subtask 'st-concept-quiz' is complete");
    await handlers.onSubmit("st-concept-quiz");
    expect(root.querySelector("[data-testid='banner']")?.textContent).toContain("NotAvailableError");
    expect(app.state.drafts.quizAnswers["st-concept-quiz"]).toEqual({ "q-mc": 2, "q-tf": true });
    const checked = root.querySelector(
      "input[name='st-concept-quiz:q-mc'][value='2']",
    ) as HTMLInputElement;
    expect(checked.hasAttribute("checked")).toBe(true);
  });

  it("sends the drafted answers on submit", async () => {
    const { api, app } = await controllerFor("full_task_view.json");
    const handlers = app.handlers();
    handlers.onQuizAnswer("st-concept-quiz", "q-mc", 0);
    await handlers.onSubmit("st-concept-quiz");
    const submitCall = api.calls.find((c) => c.method === "submit");
    expect(submitCall!.args[1]).toBe("st-concept-quiz");
    expect(submitCall!.args[2]).toEqual({ answers: { "q-mc": 0 } });
  });
});

describe("plan editing", () => {
  it("records the drafted ordering, minutes, and note", async () => {
    const { api, app } = await controllerFor("full_planning_view.json");
    const handlers = app.handlers();
    handlers.onPlanMove("st-read-primer", 1);
    handlers.onPlanMinutes("st-concept-quiz", 20);
    handlers.onStrategyNote("Quiz before primer to test myself.");
    await handlers.onPlanRecord();
    const planCall = api.calls.find((c) => c.method === "plan");
    const body = planCall!.args[1] as Record<string, unknown>;
    const ordering = body.ordering as string[];
    expect(ordering[0]).toBe("st-concept-quiz");
    expect(ordering[1]).toBe("st-read-primer");
    expect((body.time_allocations as Record<string, number>)["st-concept-quiz"]).toBe(20);
    expect(body.strategy_note).toBe("Quiz before primer to test myself.");
  });

  it("shows a rejected plan inline and keeps the draft", async () => {
    const { api, app } = await controllerFor("full_planning_view.json");
    const handlers = app.handlers();
    handlers.onPlanMove("st-read-primer", 1);
    handlers.onStrategyNote("keep me");
    api.failNext = new ApiError(
      422,
      "InvalidOrdering",
      "st-concept-quiz is ordered before its dependency st-read-primer",
    );
    await handlers.onPlanRecord();
    const banner = root.querySelector("[data-testid='banner']");
    expect(banner?.textContent).toContain("InvalidOrdering");
    expect(banner?.textContent).toContain("dependency");
    expect(app.state.drafts.planOrdering?.[0]).toBe("st-concept-quiz");
    const note = root.querySelector("[data-testid='strategy-note']") as HTMLTextAreaElement;
    expect(note.value).toBe("keep me");
    const rows = [...root.querySelectorAll(".plan-row")].map((r) => r.getAttribute("data-subtask"));
    expect(rows[0]).toBe("st-concept-quiz");
  });

  it("adopts an agent suggestion as an editable draft", async () => {
    const { api, app } = await controllerFor("full_planning_view.json");
    await app.handlers().onPlanSuggest();
    const suggested = await api.suggestPlan("ignored");
    expect(app.state.drafts.planOrdering).toEqual(suggested.suggestion);
    const rows = [...root.querySelectorAll(".plan-row")].map((r) => r.getAttribute("data-subtask"));
    expect(rows).toEqual(suggested.suggestion);
  });
});

describe("discussion chat", () => {
  it("shows the learner turn optimistically, then the reply", async () => {
    const { api, app } = await controllerFor("no_srl_task_view.json");
    const handlers = app.handlers();
    handlers.onChatInput("st-office-hours", "Why does evaluation matter?");

    let release!: () => void;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const realChat = api.chat.bind(api);
    api.chat = async (sessionId, body) => {
      await gate;
      return realChat(sessionId, body);
    };

    const sending = handlers.onChatSend("st-office-hours");
    const during = root.querySelectorAll(
      "[data-channel='subtask:st-office-hours'] .chat-turn.user",
    );
    const optimistic = [...during].map((t) => t.textContent ?? "");
    expect(optimistic.some((t) => t.includes("Why does evaluation matter?"))).toBe(true);

    release();
    await sending;
    await flush();
    const turns = root.querySelectorAll("[data-channel='subtask:st-office-hours'] .chat-turn");
    const texts = [...turns].map((t) => t.textContent ?? "");
    expect(texts.some((t) => t.includes("Why does evaluation matter?"))).toBe(true);
    expect(texts.some((t) => t.includes(api.chatReply))).toBe(true);
    const input = root.querySelector("[data-chat-input='st-office-hours']") as HTMLInputElement;
    expect(input.value).toBe("");
  });

  it("keeps the typed message when the send fails", async () => {
    const { api, app } = await controllerFor("no_srl_task_view.json");
    const handlers = app.handlers();
    handlers.onChatInput("st-office-hours", "do not lose this");
    api.failNext = new ApiError(409, "FeatureDisabled", "not part of this session condition");
    await handlers.onChatSend("st-office-hours");
    expect(root.querySelector("[data-testid='banner']")?.textContent).toContain("FeatureDisabled");
    const input = root.querySelector("[data-chat-input='st-office-hours']") as HTMLInputElement;
    expect(input.value).toBe("do not lose this");
  });
});

describe("view refresh", () => {
  it("refetches the view after every successful action", async () => {
    const { api, app } = await controllerFor("full_task_view.json");
    const before = api.calls.filter((c) => c.method === "view").length;
    await app.handlers().onAdvance();
    const after = api.calls.filter((c) => c.method === "view").length;
    expect(after).toBe(before + 1);
  });

  it("sends clock ticks only while activities are underway", async () => {
    const { api, app } = await controllerFor("full_task_view.json");
    await app.sendClockTick();
    const tick = api.calls.find((c) => c.method === "tick");
    expect(tick).toBeDefined();
    expect(tick!.args[2]).toBe("st-concept-quiz");

    const reviewApi = new FakeApi(loadView("full_review_view.json"));
    const reviewApp = new AppController(reviewApi, root, "ui-full");
    await reviewApp.refresh();
    await reviewApp.sendClockTick();
    expect(reviewApi.calls.find((c) => c.method === "tick")).toBeUndefined();
  });
});
