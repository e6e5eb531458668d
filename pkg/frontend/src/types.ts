// Mirrors of the service's view payloads.

export interface QuestionView {
  id: string;
  form: string;
  stem: string;
  options?: string[];
  left?: string[];
  right?: string[];
  pool?: string[];
  statement?: string;
}

export interface PersonaView {
  professor_name: string;
  department: string;
  university: string;
  research_field: string;
}

export interface PaperView {
  id: string;
  title: string;
  abstract: string;
  body: string;
}

export interface SubtaskContent {
  questions?: QuestionView[];
  persona?: PersonaView;
  paper?: PaperView;
}

export interface SubtaskRow {
  id: string;
  kind: string;
  title: string;
  description: string;
  status: string;
  estimated_minutes: number;
  content?: SubtaskContent;
  attempts?: number;
  quality?: Record<string, number>;
  time_spent_seconds?: number;
}

export interface PlanView {
  ordering: string[];
  time_allocations: Record<string, number>;
  strategy_note: string;
  source: string;
}

export interface TimeBudgetRow {
  subtask_id: string;
  allocated_minutes: number;
  consumed_seconds: number;
  remaining_seconds: number;
}

export interface TimeBudgetView {
  rows: TimeBudgetRow[];
  allocated_minutes_total: number;
  consumed_seconds_total: number;
  remaining_seconds_total: number;
}

export interface TranscriptTurn {
  role: string;
  text: string;
}

export interface ViewModel {
  session_id: string;
  pack_id: string;
  condition: string;
  stage: string;
  phase: string;
  clock: number;
  subtasks: SubtaskRow[];
  available: string[];
  completion_rate: number;
  transcripts: Record<string, TranscriptTurn[]>;
  plan?: PlanView;
  time_budget?: TimeBudgetView;
  reflection_text?: string;
}

export interface SubmitResult {
  subtask_id: string;
  completed: boolean;
  attempts: number;
  quality: Record<string, number>;
  status: string;
}

export interface ChatResult {
  reply: string;
  channel?: string;
  chat_turns?: number;
}

export interface PlanSuggestion {
  suggestion: string[];
  source: string;
  reply: string;
}
