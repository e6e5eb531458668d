import type { ViewModel } from "./types.js";

/** Client-local draft state; survives failed submissions and view refreshes. */
export interface Drafts {
  planOrdering: string[] | null;
  planMinutes: Record<string, number>;
  strategyNote: string;
  quizAnswers: Record<string, Record<string, unknown>>;
  summaryText: Record<string, string>;
  goalText: Record<string, string>;
  reportTitle: Record<string, string>;
  reportBody: Record<string, string>;
  chatInput: Record<string, string>;
}

export interface UiViewState {
  view: ViewModel | null;
  drafts: Drafts;
  banner: string | null;
  hints: Record<string, string>;
  openSubtask: string | null;
}

export function emptyDrafts(): Drafts {
  return {
    planOrdering: null,
    planMinutes: {},
    strategyNote: "",
    quizAnswers: {},
    summaryText: {},
    goalText: {},
    reportTitle: {},
    reportBody: {},
    chatInput: {},
  };
}

export function initialState(): UiViewState {
  return {
    view: null,
    drafts: emptyDrafts(),
    banner: null,
    hints: {},
    openSubtask: null,
  };
}

/** The plan ordering being edited: the draft if present, else the view's order. */
export function effectiveOrdering(state: UiViewState): string[] {
  if (state.drafts.planOrdering) {
    return [...state.drafts.planOrdering];
  }
  const view = state.view;
  if (!view) {
    return [];
  }
  if (view.plan) {
    return [...view.plan.ordering];
  }
  return view.subtasks.map((row) => row.id);
}

/** The minute allocation shown for a subtask, falling back to its estimate. */
export function effectiveMinutes(state: UiViewState, subtaskId: string): number {
  if (subtaskId in state.drafts.planMinutes) {
    return state.drafts.planMinutes[subtaskId];
  }
  const view = state.view;
  if (view?.plan && subtaskId in view.plan.time_allocations) {
    return view.plan.time_allocations[subtaskId];
  }
  const row = view?.subtasks.find((r) => r.id === subtaskId);
  return row ? row.estimated_minutes : 0;
}

export function moveInOrdering(state: UiViewState, subtaskId: string, delta: number): void {
  const ordering = effectiveOrdering(state);
  const index = ordering.indexOf(subtaskId);
  const target = index + delta;
  if (index < 0 || target < 0 || target >= ordering.length) {
    return;
  }
  [ordering[index], ordering[target]] = [ordering[target], ordering[index]];
  state.drafts.planOrdering = ordering;
}

/** Drop `movedId` at `targetId`'s slot, shifting the rows between them. */
export function placeInOrdering(state: UiViewState, movedId: string, targetId: string): void {
  const ordering = effectiveOrdering(state);
  const from = ordering.indexOf(movedId);
  const to = ordering.indexOf(targetId);
  if (from < 0 || to < 0 || from === to) {
    return;
  }
  ordering.splice(from, 1);
  ordering.splice(to, 0, movedId);
  state.drafts.planOrdering = ordering;
}
