import { ApiError, HttpApi, type ServiceApi } from "./api.js";
import {
  effectiveMinutes,
  effectiveOrdering,
  initialState,
  moveInOrdering,
  placeInOrdering,
  type UiViewState,
} from "./state.js";
import { render, type Handlers } from "./render.js";

const CLOCK_SECONDS = 30;

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `${error.error}: ${error.detail}`;
  }
  return error instanceof Error ? error.message : String(error);
}

/** Wires state, API calls, and rendering for one open session. */
export class AppController {
  readonly state: UiViewState;

  constructor(
    private readonly api: ServiceApi,
    private readonly root: HTMLElement,
    private readonly sessionId: string,
  ) {
    this.state = initialState();
  }

  paint(): void {
    render(this.root, this.state, this.handlers());
  }

  async refresh(): Promise<void> {
    this.state.view = await this.api.view(this.sessionId);
    this.paint();
  }

  /** Run an action, refetch the view on success, show failures inline. */
  private async perform(action: () => Promise<void>): Promise<void> {
    this.state.banner = null;
    try {
      await action();
      this.state.view = await this.api.view(this.sessionId);
    } catch (error) {
      this.state.banner = describe(error);
    }
    this.paint();
  }

  async sendClockTick(): Promise<void> {
    const view = this.state.view;
    if (!view || view.stage !== "task_process") {
      return;
    }
    const active = view.subtasks.find((row) => row.status === "in_progress");
    try {
      await this.api.tick(this.sessionId, CLOCK_SECONDS, active ? active.id : null);
      this.state.view = await this.api.view(this.sessionId);
      this.paint();
    } catch {
      // A missed tick is recoverable; the next one will land.
    }
  }

  private submissionBody(subtaskId: string): Record<string, unknown> {
    const drafts = this.state.drafts;
    const row = this.state.view?.subtasks.find((r) => r.id === subtaskId);
    if (!row) {
      return {};
    }
    if (row.kind === "quiz") {
      return { answers: drafts.quizAnswers[subtaskId] ?? {} };
    }
    if (row.kind === "discussion") {
      return {};
    }
    if (row.kind === "knowledge" || row.kind === "paper") {
      return { summary: drafts.summaryText[subtaskId] ?? "" };
    }
    if (row.kind === "writing_goal") {
      return { goal: drafts.goalText[subtaskId] ?? "" };
    }
    if (row.kind === "report") {
      return {
        title: drafts.reportTitle[subtaskId] ?? "",
        text: drafts.reportBody[subtaskId] ?? "",
      };
    }
    return { text: drafts.summaryText[subtaskId] ?? "" };
  }

  handlers(): Handlers {
    const state = this.state;
    return {
      onAdvance: () => this.perform(async () => {
        await this.api.advance(this.sessionId);
      }),

      onPlanMove: (subtaskId, delta) => {
        moveInOrdering(state, subtaskId, delta);
        this.paint();
      },
      onPlanDrop: (movedId, targetId) => {
        placeInOrdering(state, movedId, targetId);
        this.paint();
      },
      onPlanMinutes: (subtaskId, minutes) => {
        state.drafts.planMinutes[subtaskId] = minutes;
      },
      onStrategyNote: (text) => {
        state.drafts.strategyNote = text;
      },
      onPlanSuggest: () => this.perform(async () => {
        const result = await this.api.suggestPlan(this.sessionId);
        state.drafts.planOrdering = [...result.suggestion];
      }),
      onPlanRecord: () => this.perform(async () => {
        const ordering = effectiveOrdering(state);
        const allocations: Record<string, number> = {};
        for (const sid of ordering) {
          allocations[sid] = effectiveMinutes(state, sid);
        }
        await this.api.plan(this.sessionId, {
          ordering,
          time_allocations: allocations,
          strategy_note: state.drafts.strategyNote,
        });
        state.drafts.planOrdering = null;
        state.drafts.planMinutes = {};
      }),

      onStart: (subtaskId) => this.perform(async () => {
        await this.api.start(this.sessionId, subtaskId);
        state.openSubtask = subtaskId;
      }),
      onSubmit: (subtaskId) => this.perform(async () => {
        await this.api.submit(this.sessionId, subtaskId, this.submissionBody(subtaskId));
      }),
      onQuizAnswer: (subtaskId, questionId, value) => {
        const answers = state.drafts.quizAnswers[subtaskId] ?? {};
        answers[questionId] = value;
        state.drafts.quizAnswers[subtaskId] = answers;
      },
      onSummaryDraft: (subtaskId, text) => {
        state.drafts.summaryText[subtaskId] = text;
      },
      onGoalDraft: (subtaskId, text) => {
        state.drafts.goalText[subtaskId] = text;
      },
      onReportTitleDraft: (subtaskId, text) => {
        state.drafts.reportTitle[subtaskId] = text;
      },
      onReportBodyDraft: (subtaskId, text) => {
        state.drafts.reportBody[subtaskId] = text;
      },

      onChatInput: (subtaskId, text) => {
        state.drafts.chatInput[subtaskId] = text;
      },
      onChatSend: (subtaskId) => {
        const text = (state.drafts.chatInput[subtaskId] ?? "").trim();
        if (!text) {
          return;
        }
        // Optimistic: show the learner's turn at once, reconcile on refresh.
        const view = state.view;
        if (view) {
          const channel = `subtask:${subtaskId}`;
          const turns = view.transcripts[channel] ?? [];
          view.transcripts[channel] = [...turns, { role: "user", text }];
          this.paint();
        }
        return this.perform(async () => {
          await this.api.chat(this.sessionId, {
            interaction: "discussion_message",
            subtask_id: subtaskId,
            text,
          });
          state.drafts.chatInput[subtaskId] = "";
        });
      },

      onHint: (subtaskId, questionId) => this.perform(async () => {
        const answers = state.drafts.quizAnswers[subtaskId] ?? {};
        const result = await this.api.chat(this.sessionId, {
          interaction: "quiz_help",
          subtask_id: subtaskId,
          question_id: questionId,
          attempt: answers[questionId] ?? null,
        });
        state.hints[subtaskId] = result.reply;
      }),
      onPaperHelp: (subtaskId) => this.perform(async () => {
        await this.api.chat(this.sessionId, {
          interaction: "paper_help",
          subtask_id: subtaskId,
          text: state.drafts.chatInput[subtaskId] || "How should I structure this review?",
          summary: state.drafts.summaryText[subtaskId] ?? "",
        });
      }),
      onWritingHelp: (subtaskId) => this.perform(async () => {
        await this.api.chat(this.sessionId, {
          interaction: "writing_help",
          subtask_id: subtaskId,
          title: state.drafts.reportTitle[subtaskId] ?? "",
          body: state.drafts.reportBody[subtaskId] ?? "",
          text: "How can I improve this draft?",
        });
      }),
      onReflect: () => this.perform(async () => {
        await this.api.chat(this.sessionId, { interaction: "reflection_request" });
      }),
    };
  }
}

// ---------------------------------------------------------------------------
// launch page: pick a pack (condition selection sits behind ?experimenter=1)

async function renderLaunch(api: ServiceApi, root: HTMLElement, experimenter: boolean): Promise<void> {
  const packs = await api.packs();
  root.textContent = "";
  const form = document.createElement("form");
  form.setAttribute("data-testid", "launch-form");
  const title = document.createElement("h1");
  title.textContent = "Start a learning session";
  form.appendChild(title);

  const packSelect = document.createElement("select");
  packSelect.setAttribute("data-testid", "pack-select");
  for (const packId of packs) {
    const option = document.createElement("option");
    option.value = packId;
    option.textContent = packId;
    packSelect.appendChild(option);
  }
  form.appendChild(packSelect);

  let conditionSelect: HTMLSelectElement | null = null;
  if (experimenter) {
    conditionSelect = document.createElement("select");
    conditionSelect.setAttribute("data-testid", "condition-select");
    for (const condition of ["full_srl", "no_srl"]) {
      const option = document.createElement("option");
      option.value = condition;
      option.textContent = condition;
      conditionSelect.appendChild(option);
    }
    form.appendChild(conditionSelect);
  }

  const go = document.createElement("button");
  go.type = "submit";
  go.textContent = "Open session";
  form.appendChild(go);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      const condition = conditionSelect ? conditionSelect.value : "full_srl";
      const sessionId = await api.openSession(packSelect.value, condition);
      const params = new URLSearchParams(window.location.search);
      params.set("session", sessionId);
      window.history.replaceState(null, "", `?${params.toString()}`);
      await startSession(api, root, sessionId);
    })();
  });
  root.appendChild(form);
}

async function startSession(api: ServiceApi, root: HTMLElement, sessionId: string): Promise<void> {
  const controller = new AppController(api, root, sessionId);
  await controller.refresh();
  window.setInterval(() => void controller.sendClockTick(), CLOCK_SECONDS * 1000);
}

export async function bootstrap(root: HTMLElement): Promise<void> {
  const api = new HttpApi("");
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session");
  if (sessionId) {
    await startSession(api, root, sessionId);
  } else {
    await renderLaunch(api, root, params.get("experimenter") === "1");
  }
}
