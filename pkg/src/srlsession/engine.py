"""Session state machine: stage progression, subtask unlocking, completion rules.

The engine is deliberately free of input/output and wall-clock reads. Every
operation is a deterministic function of (state, inputs); callers feed elapsed
time explicitly. That is what makes event replay an exact reconstruction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .content import (
    CompletionCriteria,
    CompletionRule,
    ContentPack,
    RULE_KINDS,
    SubtaskKind,
    check_answer,
    effective_dependencies,
    session_subtask_order,
)
from .words import count_words


class EngineError(Exception):
    """Base class for state-machine violations."""


class StageGateError(EngineError):
    """Stage exit condition not met."""


class TerminalError(EngineError):
    """Session already at the terminal stage."""


class NotAvailableError(EngineError):
    """Subtask is not in a startable/completable status."""


class CriteriaError(EngineError):
    """Outcome does not satisfy the subtask's completion rule."""


class IncompatibleRule(EngineError):
    """Completion rule does not apply to the subtask kind."""


class TaskStage(str, enum.Enum):
    INTRODUCTION = "introduction"
    PLANNING = "planning"
    TASK_PROCESS = "task_process"
    REVIEW = "review"

    @property
    def rank(self) -> int:
        return _STAGE_ORDER.index(self)


_STAGE_ORDER = [TaskStage.INTRODUCTION, TaskStage.PLANNING, TaskStage.TASK_PROCESS, TaskStage.REVIEW]


class Condition(str, enum.Enum):
    FULL_SRL = "full_srl"
    NO_SRL = "no_srl"


class SubtaskStatus(str, enum.Enum):
    LOCKED = "locked"
    AVAILABLE = "available"
    IN_PROGRESS = "in_progress"
    COMPLETE = "complete"


@dataclass
class SubtaskOutcome:
    subtask_id: str
    time_spent_seconds: int = 0
    attempts: int = 0
    quality: dict[str, float] = field(default_factory=dict)
    artifact_text: Optional[str] = None


@dataclass
class ChatTurn:
    role: str  # "user" | "assistant"
    text: str


@dataclass
class LearningPlan:
    ordering: list[str]
    time_allocations: dict[str, int]
    strategy_note: str = ""
    source: str = "agent_suggested"  # or "learner_edited"


@dataclass
class SessionState:
    session_id: str
    pack_id: str
    condition: Condition
    stage: TaskStage = TaskStage.INTRODUCTION
    subtask_status: dict[str, SubtaskStatus] = field(default_factory=dict)
    outcomes: dict[str, SubtaskOutcome] = field(default_factory=dict)
    plan: Optional[LearningPlan] = None
    transcripts: dict[str, list[ChatTurn]] = field(default_factory=dict)
    clock: int = 0
    event_seq: int = 0
    assessments: list[dict[str, Any]] = field(default_factory=list)

    def outcome_for(self, subtask_id: str) -> SubtaskOutcome:
        """Existing outcome record, created lazily on first touch."""
        if subtask_id not in self.outcomes:
            self.outcomes[subtask_id] = SubtaskOutcome(subtask_id=subtask_id)
        return self.outcomes[subtask_id]

    def transcript(self, channel: str) -> list[ChatTurn]:
        return self.transcripts.setdefault(channel, [])

    def user_turns(self, channel: str) -> int:
        return sum(1 for t in self.transcripts.get(channel, []) if t.role == "user")

    def assistant_turns(self, channel: str) -> int:
        return sum(1 for t in self.transcripts.get(channel, []) if t.role == "assistant")


def start_session(pack: ContentPack, condition: Condition, session_id: str) -> SessionState:
    """Fresh session at Introduction; everything locked until TaskProcess opens."""
    return SessionState(
        session_id=session_id,
        pack_id=pack.pack_id,
        condition=condition,
        subtask_status={s.subtask_id: SubtaskStatus.LOCKED for s in pack.all_subtasks()},
    )


def _unlock_ready(s: SessionState, pack: ContentPack) -> None:
    """Promote Locked subtasks whose effective dependencies are all Complete."""
    for sub in pack.all_subtasks():
        sid = sub.subtask_id
        if s.subtask_status[sid] is not SubtaskStatus.LOCKED:
            continue
        deps = effective_dependencies(pack, sid)
        if all(s.subtask_status[d] is SubtaskStatus.COMPLETE for d in deps):
            s.subtask_status[sid] = SubtaskStatus.AVAILABLE


def next_stage(s: SessionState) -> TaskStage:
    """The stage an advance would move to (NoSrl skips Planning)."""
    if s.stage is TaskStage.REVIEW:
        raise TerminalError("session is already at the review stage")
    if s.stage is TaskStage.INTRODUCTION and s.condition is Condition.NO_SRL:
        return TaskStage.TASK_PROCESS
    return _STAGE_ORDER[s.stage.rank + 1]


def advance_stage(s: SessionState, pack: ContentPack) -> SessionState:
    """Move to the immediate successor stage once the exit condition holds."""
    target = next_stage(s)
    if s.stage is TaskStage.PLANNING and s.plan is None:
        raise StageGateError("planning stage requires a recorded plan")
    if s.stage is TaskStage.TASK_PROCESS:
        incomplete = [
            sid for sid, st in s.subtask_status.items() if st is not SubtaskStatus.COMPLETE
        ]
        if incomplete:
            raise StageGateError(f"{len(incomplete)} subtasks incomplete: {sorted(incomplete)}")
    s.stage = target
    if target is TaskStage.TASK_PROCESS:
        _unlock_ready(s, pack)
    return s


def start_subtask(s: SessionState, subtask_id: str) -> SessionState:
    status = s.subtask_status.get(subtask_id)
    if status is None:
        raise NotAvailableError(f"unknown subtask {subtask_id!r}")
    if status is not SubtaskStatus.AVAILABLE:
        raise NotAvailableError(f"subtask {subtask_id!r} is {status.value}, not available")
    s.subtask_status[subtask_id] = SubtaskStatus.IN_PROGRESS
    s.outcome_for(subtask_id)
    return s


def evaluate_completion(
    criteria: CompletionCriteria,
    outcome: SubtaskOutcome,
    kind: Optional[SubtaskKind] = None,
) -> bool:
    """Pure predicate: does the outcome satisfy the rule? Thresholds are inclusive."""
    if kind is not None and kind not in RULE_KINDS[criteria.rule]:
        raise IncompatibleRule(f"rule {criteria.rule.value} does not apply to kind {kind.value}")
    rule = criteria.rule
    quality = outcome.quality
    if rule is CompletionRule.ALL_QUESTIONS_CORRECT:
        total = quality.get("quiz_question_count", 0)
        return total > 0 and quality.get("quiz_correct_count", -1) == total
    if rule is CompletionRule.MIN_QUESTIONS_CORRECT:
        return quality.get("quiz_correct_count", 0) >= (criteria.n or 0)
    if rule is CompletionRule.MIN_WORDS:
        return quality.get("word_count", 0) >= (criteria.n or 0)
    if rule is CompletionRule.MIN_CHAT_TURNS:
        return quality.get("chat_turns", 0) >= (criteria.n or 0)
    # SummarySubmitted and GoalRecorded both require a non-empty artifact
    return bool(outcome.artifact_text and outcome.artifact_text.strip())


def mark_complete(s: SessionState, pack: ContentPack, subtask_id: str) -> SessionState:
    """Set a subtask Complete and promote newly unblocked ones. No criteria check."""
    s.subtask_status[subtask_id] = SubtaskStatus.COMPLETE
    _unlock_ready(s, pack)
    return s


def complete_subtask(
    s: SessionState, pack: ContentPack, subtask_id: str, outcome: SubtaskOutcome
) -> SessionState:
    """Complete a subtask after checking availability and the completion rule."""
    status = s.subtask_status.get(subtask_id)
    if status not in (SubtaskStatus.AVAILABLE, SubtaskStatus.IN_PROGRESS):
        raise NotAvailableError(f"subtask {subtask_id!r} is {status and status.value}, not active")
    sub = pack.subtask(subtask_id)
    if not evaluate_completion(sub.completion, outcome, sub.kind):
        raise CriteriaError(
            f"subtask {subtask_id!r} fails rule {sub.completion.rule.value}"
        )
    s.outcomes[subtask_id] = outcome
    return mark_complete(s, pack, subtask_id)


def apply_submission(
    s: SessionState, pack: ContentPack, subtask_id: str, submission: Mapping[str, Any]
) -> SubtaskOutcome:
    """Fold one submission into the subtask's outcome and count the attempt.

    Does not change status; callers decide completion with evaluate_completion.
    Quality indicators depend on the kind: quizzes get correctness counts,
    discussions get chat turn counts, text artifacts get word counts.
    """
    status = s.subtask_status.get(subtask_id)
    if status not in (SubtaskStatus.AVAILABLE, SubtaskStatus.IN_PROGRESS):
        raise NotAvailableError(f"subtask {subtask_id!r} is {status and status.value}, not active")
    sub = pack.subtask(subtask_id)
    outcome = s.outcome_for(subtask_id)
    outcome.attempts += 1
    if sub.kind is SubtaskKind.QUIZ:
        questions = pack.quiz_questions(subtask_id)
        answers = submission.get("answers") or {}
        correct = sum(
            1 for q in questions if q.question_id in answers and check_answer(q, answers[q.question_id])
        )
        outcome.quality["quiz_correct_count"] = correct
        outcome.quality["quiz_question_count"] = len(questions)
    elif sub.kind is SubtaskKind.DISCUSSION:
        outcome.quality["chat_turns"] = s.user_turns(f"subtask:{subtask_id}")
    else:
        text = submission.get("text") or submission.get("summary") or submission.get("goal") or ""
        outcome.artifact_text = text
        outcome.quality["word_count"] = count_words(text)
    if s.subtask_status[subtask_id] is SubtaskStatus.AVAILABLE:
        s.subtask_status[subtask_id] = SubtaskStatus.IN_PROGRESS
    return outcome


def submit_subtask(
    s: SessionState, pack: ContentPack, subtask_id: str, submission: Mapping[str, Any]
) -> tuple[bool, SubtaskOutcome]:
    """Submission plus completion check; failed attempts leave the subtask retryable."""
    outcome = apply_submission(s, pack, subtask_id, submission)
    sub = pack.subtask(subtask_id)
    if evaluate_completion(sub.completion, outcome, sub.kind):
        mark_complete(s, pack, subtask_id)
        return True, outcome
    return False, outcome


def available_subtasks(s: SessionState, pack: ContentPack) -> list[str]:
    """Available subtasks in topological-then-declaration order; empty outside TaskProcess."""
    if s.stage is not TaskStage.TASK_PROCESS:
        return []
    return [
        sid
        for sid in session_subtask_order(pack)
        if s.subtask_status[sid] is SubtaskStatus.AVAILABLE
    ]


def task_complete(s: SessionState, pack: ContentPack, task_id: str) -> bool:
    """A parent task is complete exactly when all its subtasks are."""
    return all(
        s.subtask_status[sub.subtask_id] is SubtaskStatus.COMPLETE
        for sub in pack.task(task_id).subtasks
    )
