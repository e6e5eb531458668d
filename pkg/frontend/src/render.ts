import type {
  QuestionView,
  SubtaskRow,
  TimeBudgetView,
  TranscriptTurn,
  ViewModel,
} from "./types.js";
import type { UiViewState } from "./state.js";
import { effectiveMinutes, effectiveOrdering } from "./state.js";

/** Callbacks the renderer wires onto controls; app.ts supplies the live ones.
 * Async handlers return their promise so tests can await settled state. */
export interface Handlers {
  onAdvance(): void | Promise<void>;
  onPlanMove(subtaskId: string, delta: number): void;
  onPlanDrop(movedId: string, targetId: string): void;
  onPlanMinutes(subtaskId: string, minutes: number): void;
  onStrategyNote(text: string): void;
  onPlanSuggest(): void | Promise<void>;
  onPlanRecord(): void | Promise<void>;
  onStart(subtaskId: string): void | Promise<void>;
  onSubmit(subtaskId: string): void | Promise<void>;
  onQuizAnswer(subtaskId: string, questionId: string, value: unknown): void;
  onSummaryDraft(subtaskId: string, text: string): void;
  onGoalDraft(subtaskId: string, text: string): void;
  onReportTitleDraft(subtaskId: string, text: string): void;
  onReportBodyDraft(subtaskId: string, text: string): void;
  onChatInput(subtaskId: string, text: string): void;
  onChatSend(subtaskId: string): void | Promise<void>;
  onHint(subtaskId: string, questionId: string): void | Promise<void>;
  onPaperHelp(subtaskId: string): void | Promise<void>;
  onWritingHelp(subtaskId: string): void | Promise<void>;
  onReflect(): void | Promise<void>;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function button(label: string, attrs: Record<string, string>, onClick: () => void): HTMLButtonElement {
  const node = el("button", { type: "button", ...attrs }, label);
  node.addEventListener("click", onClick);
  return node;
}

function chatChannel(subtaskId: string): string {
  return `subtask:${subtaskId}`;
}

function transcriptList(turns: TranscriptTurn[], channel: string): HTMLElement {
  const list = el("div", { class: "transcript", "data-channel": channel });
  for (const turn of turns) {
    const entry = el("p", { class: `chat-turn ${turn.role}` });
    entry.appendChild(el("span", { class: "role" }, `${turn.role}: `));
    entry.appendChild(el("span", { class: "text" }, turn.text));
    list.appendChild(entry);
  }
  return list;
}

// ---------------------------------------------------------------------------
// plan editor (full condition only)

function planEditor(state: UiViewState, view: ViewModel, handlers: Handlers): HTMLElement {
  const section = el("section", { class: "plan-editor", "data-srl": "1", "data-testid": "plan-editor" });
  section.appendChild(el("h2", {}, "Session plan"));
  const ordering = effectiveOrdering(state);
  const titles = new Map(view.subtasks.map((row) => [row.id, row.title]));
  const rows = el("div", { class: "plan-rows" });
  ordering.forEach((sid, index) => {
    const row = el("div", { class: "plan-row", "data-subtask": sid, draggable: "true" });
    row.addEventListener("dragstart", (event) => {
      (event as DragEvent).dataTransfer?.setData("text/plain", sid);
    });
    row.addEventListener("dragover", (event) => event.preventDefault());
    row.addEventListener("drop", (event) => {
      event.preventDefault();
      const movedId = (event as DragEvent).dataTransfer?.getData("text/plain");
      if (movedId && movedId !== sid) {
        handlers.onPlanDrop(movedId, sid);
      }
    });
    row.appendChild(el("span", { class: "plan-position" }, String(index + 1)));
    row.appendChild(el("span", { class: "plan-title" }, titles.get(sid) ?? sid));
    row.appendChild(button("up", { "data-move-up": sid }, () => handlers.onPlanMove(sid, -1)));
    row.appendChild(button("down", { "data-move-down": sid }, () => handlers.onPlanMove(sid, 1)));
    const minutes = el("input", {
      type: "number",
      min: "1",
      "data-minutes-for": sid,
      value: String(effectiveMinutes(state, sid)),
    });
    minutes.addEventListener("change", () => {
      handlers.onPlanMinutes(sid, Number(minutes.value));
    });
    row.appendChild(minutes);
    rows.appendChild(row);
  });
  section.appendChild(rows);

  const note = el("textarea", {
    "data-testid": "strategy-note",
    placeholder: "How will you approach this session?",
  });
  note.value = state.drafts.strategyNote || view.plan?.strategy_note || "";
  note.addEventListener("input", () => handlers.onStrategyNote(note.value));
  section.appendChild(note);

  section.appendChild(button("Suggest a plan", { "data-testid": "plan-suggest" }, handlers.onPlanSuggest));
  section.appendChild(button("Record plan", { "data-testid": "plan-record" }, handlers.onPlanRecord));
  if (view.plan) {
    section.appendChild(
      el("p", { class: "plan-source", "data-testid": "plan-source" }, `Plan source: ${view.plan.source}`),
    );
  }
  const planTurns = view.transcripts["plan"];
  if (planTurns && planTurns.length) {
    section.appendChild(transcriptList(planTurns, "plan"));
  }
  return section;
}

// ---------------------------------------------------------------------------
// time budget HUD (full condition only)

function formatSeconds(seconds: number): string {
  const sign = seconds < 0 ? "-" : "";
  const whole = Math.abs(seconds);
  const minutes = Math.floor(whole / 60);
  const rest = whole % 60;
  return `${sign}${minutes}m ${rest}s`;
}

function timeHud(budget: TimeBudgetView, titles: Map<string, string>): HTMLElement {
  const section = el("section", { class: "time-hud", "data-srl": "1", "data-testid": "time-hud" });
  section.appendChild(el("h2", {}, "Time budget"));
  const table = el("table");
  const head = el("tr");
  for (const label of ["Subtask", "Allocated", "Spent", "Remaining"]) {
    head.appendChild(el("th", {}, label));
  }
  table.appendChild(head);
  for (const row of budget.rows) {
    const overrun = row.remaining_seconds < 0;
    const tr = el("tr", {
      class: overrun ? "budget-row overrun" : "budget-row",
      "data-budget-row": row.subtask_id,
    });
    tr.appendChild(el("td", {}, titles.get(row.subtask_id) ?? row.subtask_id));
    tr.appendChild(el("td", {}, `${row.allocated_minutes}m`));
    tr.appendChild(el("td", {}, formatSeconds(row.consumed_seconds)));
    tr.appendChild(el("td", { class: "remaining" }, formatSeconds(row.remaining_seconds)));
    table.appendChild(tr);
  }
  const totals = el("tr", { class: "budget-totals", "data-testid": "budget-totals" });
  totals.appendChild(el("td", {}, "Total"));
  totals.appendChild(el("td", {}, `${budget.allocated_minutes_total}m`));
  totals.appendChild(el("td", {}, formatSeconds(budget.consumed_seconds_total)));
  totals.appendChild(el("td", {}, formatSeconds(budget.remaining_seconds_total)));
  table.appendChild(totals);
  section.appendChild(table);
  return section;
}

// ---------------------------------------------------------------------------
// quiz controls

function quizControl(
  subtaskId: string,
  question: QuestionView,
  draft: unknown,
  handlers: Handlers,
): HTMLElement {
  const box = el("fieldset", { class: "question", "data-question": question.id });
  box.appendChild(el("legend", {}, question.stem));
  if (question.form === "multiple_choice") {
    (question.options ?? []).forEach((option, index) => {
      const label = el("label", { class: "option" });
      const input = el("input", {
        type: "radio",
        name: `${subtaskId}:${question.id}`,
        value: String(index),
      });
      if (draft === index) {
        input.setAttribute("checked", "checked");
      }
      input.addEventListener("change", () => handlers.onQuizAnswer(subtaskId, question.id, index));
      label.appendChild(input);
      label.appendChild(el("span", {}, option));
      box.appendChild(label);
    });
  } else if (question.form === "true_false") {
    box.appendChild(el("p", { class: "statement" }, question.statement ?? ""));
    for (const truth of [true, false]) {
      const label = el("label", { class: "option" });
      const input = el("input", {
        type: "radio",
        name: `${subtaskId}:${question.id}`,
        value: String(truth),
      });
      if (draft === truth) {
        input.setAttribute("checked", "checked");
      }
      input.addEventListener("change", () => handlers.onQuizAnswer(subtaskId, question.id, truth));
      label.appendChild(input);
      label.appendChild(el("span", {}, truth ? "True" : "False"));
      box.appendChild(label);
    }
  } else if (question.form === "ordering") {
    const pool = question.pool ?? [];
    const chosen = Array.isArray(draft) ? (draft as string[]) : pool.map(() => "");
    pool.forEach((_, position) => {
      const select = el("select", { "data-order-select": `${question.id}:${position}` });
      select.appendChild(el("option", { value: "" }, "(pick)"));
      for (const item of pool) {
        const option = el("option", { value: item }, item);
        if (chosen[position] === item) {
          option.setAttribute("selected", "selected");
        }
        select.appendChild(option);
      }
      select.addEventListener("change", () => {
        const next = [...chosen];
        next[position] = select.value;
        handlers.onQuizAnswer(subtaskId, question.id, next);
      });
      box.appendChild(el("label", { class: "order-slot" }, `Step ${position + 1}: `)).appendChild(select);
    });
  } else {
    const mapping = (draft && typeof draft === "object" ? draft : {}) as Record<string, string>;
    for (const left of question.left ?? []) {
      const select = el("select", { "data-match-for": `${question.id}:${left}` });
      select.appendChild(el("option", { value: "" }, "(pick)"));
      for (const right of question.right ?? []) {
        const option = el("option", { value: right }, right);
        if (mapping[left] === right) {
          option.setAttribute("selected", "selected");
        }
        select.appendChild(option);
      }
      select.addEventListener("change", () => {
        handlers.onQuizAnswer(subtaskId, question.id, { ...mapping, [left]: select.value });
      });
      box.appendChild(el("label", { class: "match-slot" }, `${left} matches `)).appendChild(select);
    }
  }
  return box;
}

// ---------------------------------------------------------------------------
// subtask cards

function paperPanel(row: SubtaskRow): HTMLElement | null {
  const paper = row.content?.paper;
  if (!paper) {
    return null;
  }
  const panel = el("article", { class: "paper", "data-paper": paper.id });
  panel.appendChild(el("h4", {}, paper.title));
  panel.appendChild(el("p", { class: "abstract" }, paper.abstract));
  panel.appendChild(el("p", { class: "body" }, paper.body));
  return panel;
}

function personaPanel(row: SubtaskRow): HTMLElement | null {
  const persona = row.content?.persona;
  if (!persona) {
    return null;
  }
  const panel = el("aside", { class: "persona" });
  panel.appendChild(
    el("p", {}, `${persona.professor_name}, ${persona.department}, ${persona.university}`),
  );
  panel.appendChild(el("p", { class: "field" }, `Research field: ${persona.research_field}`));
  return panel;
}

function textEditor(
  value: string,
  attrs: Record<string, string>,
  onInput: (text: string) => void,
): HTMLTextAreaElement {
  const area = el("textarea", attrs);
  area.value = value;
  area.addEventListener("input", () => onInput(area.value));
  return area;
}

function chatPanel(
  state: UiViewState,
  view: ViewModel,
  row: SubtaskRow,
  handlers: Handlers,
): HTMLElement {
  const channel = chatChannel(row.id);
  const panel = el("div", { class: "chat-panel" });
  panel.appendChild(transcriptList(view.transcripts[channel] ?? [], channel));
  const input = el("input", {
    type: "text",
    "data-chat-input": row.id,
    placeholder: "Ask the professor...",
  });
  input.value = state.drafts.chatInput[row.id] ?? "";
  input.addEventListener("input", () => handlers.onChatInput(row.id, input.value));
  panel.appendChild(input);
  panel.appendChild(button("Send", { "data-chat-send": row.id }, () => handlers.onChatSend(row.id)));
  return panel;
}

function submissionForm(
  state: UiViewState,
  view: ViewModel,
  row: SubtaskRow,
  srlOn: boolean,
  handlers: Handlers,
): HTMLElement {
  const form = el("div", { class: "submission" });
  if (row.kind === "quiz") {
    const answers = state.drafts.quizAnswers[row.id] ?? {};
    for (const question of row.content?.questions ?? []) {
      form.appendChild(quizControl(row.id, question, answers[question.id], handlers));
      if (srlOn) {
        form.appendChild(
          button("Hint", { "data-hint-for": question.id, "data-srl": "1" }, () =>
            handlers.onHint(row.id, question.id),
          ),
        );
      }
    }
    const hint = state.hints[row.id];
    if (hint && srlOn) {
      const panel = el("p", { class: "hint", "data-srl": "1", "data-hint-panel": row.id }, hint);
      form.appendChild(panel);
    }
  } else if (row.kind === "discussion") {
    form.appendChild(chatPanel(state, view, row, handlers));
  } else if (row.kind === "knowledge" || row.kind === "paper") {
    form.appendChild(
      textEditor(state.drafts.summaryText[row.id] ?? "", {
        "data-summary-for": row.id,
        placeholder: "Summarize what you read",
      }, (text) => handlers.onSummaryDraft(row.id, text)),
    );
  } else if (row.kind === "writing_goal") {
    form.appendChild(
      textEditor(state.drafts.goalText[row.id] ?? "", {
        "data-goal-for": row.id,
        placeholder: "State your writing goal",
      }, (text) => handlers.onGoalDraft(row.id, text)),
    );
  } else if (row.kind === "report") {
    const title = el("input", { type: "text", "data-report-title": row.id, placeholder: "Report title" });
    title.value = state.drafts.reportTitle[row.id] ?? "";
    title.addEventListener("input", () => handlers.onReportTitleDraft(row.id, title.value));
    form.appendChild(title);
    form.appendChild(
      textEditor(state.drafts.reportBody[row.id] ?? "", {
        "data-report-body": row.id,
        placeholder: "Write your report",
      }, (text) => handlers.onReportBodyDraft(row.id, text)),
    );
    if (srlOn) {
      form.appendChild(
        button("Ask the writing coach", { "data-writing-help": row.id, "data-srl": "1" }, () =>
          handlers.onWritingHelp(row.id),
        ),
      );
    }
  } else {
    // review and insight subtasks both collect free text
    form.appendChild(
      textEditor(state.drafts.summaryText[row.id] ?? "", {
        "data-text-for": row.id,
        placeholder: row.kind === "review" ? "Write your review" : "Write your memo",
      }, (text) => handlers.onSummaryDraft(row.id, text)),
    );
    if (row.kind === "review" && srlOn) {
      form.appendChild(
        button("Ask the review guide", { "data-paper-help": row.id, "data-srl": "1" }, () =>
          handlers.onPaperHelp(row.id),
        ),
      );
    }
  }
  const helpTurns = view.transcripts[chatChannel(row.id)];
  if (row.kind !== "discussion" && helpTurns && helpTurns.length) {
    form.appendChild(transcriptList(helpTurns, chatChannel(row.id)));
  }
  form.appendChild(button("Submit", { "data-submit": row.id }, () => handlers.onSubmit(row.id)));
  return form;
}

function subtaskCard(
  state: UiViewState,
  view: ViewModel,
  row: SubtaskRow,
  srlOn: boolean,
  handlers: Handlers,
): HTMLElement {
  const card = el("section", {
    class: `subtask-card ${row.status}`,
    "data-subtask": row.id,
    "data-status": row.status,
  });
  const heading = el("h3", {}, row.title);
  heading.appendChild(el("span", { class: "status-badge" }, ` [${row.status.replace("_", " ")}]`));
  card.appendChild(heading);
  if (row.status === "locked") {
    card.appendChild(el("p", { class: "locked-note" }, "Locked until its prerequisites are complete."));
    return card;
  }
  card.appendChild(el("p", { class: "description" }, row.description));
  const paper = paperPanel(row);
  if (paper) {
    card.appendChild(paper);
  }
  const persona = personaPanel(row);
  if (persona) {
    card.appendChild(persona);
  }
  if (row.attempts !== undefined) {
    const quality = Object.entries(row.quality ?? {})
      .map(([key, value]) => `${key}=${value}`)
      .join(", ");
    card.appendChild(
      el("p", { class: "outcome", "data-outcome": row.id },
        `Attempts: ${row.attempts}${quality ? `; ${quality}` : ""}`),
    );
  }
  if (row.status === "available") {
    card.appendChild(button("Start", { "data-start": row.id }, () => handlers.onStart(row.id)));
  } else if (row.status === "in_progress") {
    card.appendChild(submissionForm(state, view, row, srlOn, handlers));
  }
  return card;
}

// ---------------------------------------------------------------------------
// stage panels

function introductionPanel(view: ViewModel, handlers: Handlers): HTMLElement {
  const panel = el("section", { class: "stage-panel introduction" });
  panel.appendChild(el("h2", {}, "Welcome"));
  panel.appendChild(
    el("p", {}, "This session walks through the activities below. Advance when you are ready."),
  );
  const list = el("ul", { class: "overview" });
  for (const row of view.subtasks) {
    list.appendChild(el("li", { "data-overview": row.id }, `${row.title} (~${row.estimated_minutes}m)`));
  }
  panel.appendChild(list);
  panel.appendChild(button("Begin", { "data-testid": "advance" }, handlers.onAdvance));
  return panel;
}

function taskProcessPanel(
  state: UiViewState,
  view: ViewModel,
  srlOn: boolean,
  handlers: Handlers,
): HTMLElement {
  const panel = el("section", { class: "stage-panel task-process" });
  if (view.time_budget) {
    const titles = new Map(view.subtasks.map((row) => [row.id, row.title]));
    panel.appendChild(timeHud(view.time_budget, titles));
  }
  for (const row of view.subtasks) {
    panel.appendChild(subtaskCard(state, view, row, srlOn, handlers));
  }
  panel.appendChild(button("Finish activities", { "data-testid": "advance" }, handlers.onAdvance));
  return panel;
}

function reviewPanel(view: ViewModel, srlOn: boolean, handlers: Handlers): HTMLElement {
  const panel = el("section", { class: "stage-panel review" });
  panel.appendChild(el("h2", {}, "Session review"));
  panel.appendChild(
    el("p", { "data-testid": "completion-rate" },
      `Completion: ${(view.completion_rate * 100).toFixed(0)}%`),
  );
  if (srlOn) {
    const reflection = el("section", {
      class: "reflection",
      "data-srl": "1",
      "data-testid": "reflection-panel",
    });
    reflection.appendChild(el("h3", {}, "Reflection"));
    if (view.reflection_text) {
      reflection.appendChild(el("p", { "data-testid": "reflection-text" }, view.reflection_text));
    } else {
      reflection.appendChild(
        button("Request a reflection", { "data-testid": "reflection-request" }, handlers.onReflect),
      );
    }
    panel.appendChild(reflection);
  }
  const done = view.subtasks.filter((row) => row.status === "complete");
  const list = el("ul", { class: "review-outcomes" });
  for (const row of done) {
    list.appendChild(el("li", {}, `${row.title}: ${row.attempts ?? 0} attempt(s)`));
  }
  panel.appendChild(list);
  return panel;
}

// ---------------------------------------------------------------------------
// top level

export function render(root: HTMLElement, state: UiViewState, handlers: Handlers): void {
  root.textContent = "";
  const view = state.view;
  if (!view) {
    root.appendChild(el("p", { "data-testid": "loading" }, "Loading session..."));
    return;
  }
  const srlOn = view.condition === "full_srl";
  const header = el("header");
  header.appendChild(el("h1", {}, `Learning session: ${view.pack_id}`));
  header.appendChild(
    el("p", { "data-testid": "stage" }, `Stage: ${view.stage} (phase: ${view.phase})`),
  );
  root.appendChild(header);
  if (state.banner) {
    root.appendChild(el("p", { class: "banner", role: "alert", "data-testid": "banner" }, state.banner));
  }
  if (view.stage === "introduction") {
    root.appendChild(introductionPanel(view, handlers));
  } else if (view.stage === "planning") {
    const panel = el("section", { class: "stage-panel planning" });
    panel.appendChild(planEditor(state, view, handlers));
    panel.appendChild(button("Start the activities", { "data-testid": "advance" }, handlers.onAdvance));
    root.appendChild(panel);
  } else if (view.stage === "task_process") {
    root.appendChild(taskProcessPanel(state, view, srlOn, handlers));
  } else {
    root.appendChild(reviewPanel(view, srlOn, handlers));
  }
}
