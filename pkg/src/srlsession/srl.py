"""Self-regulated-learning scaffolding layer.

Derives the SRL phase from the task stage, records and validates learning
plans, attributes elapsed time to subtasks, and projects monitor metrics.
All functions here either mutate the session under the engine's single-writer
rule or are pure projections.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .content import ContentPack, effective_dependencies
from .engine import (
    Condition,
    EngineError,
    LearningPlan,
    SessionState,
    SubtaskStatus,
    TaskStage,
)


class PhaseError(EngineError):
    """SRL operation attempted at the wrong stage or under the wrong condition."""


class InvalidOrdering(EngineError):
    """Plan ordering is not a dependency-respecting permutation of the subtasks."""


class InvalidAllocation(EngineError):
    """Plan time allocations are missing or below one minute."""


class NotActiveError(EngineError):
    """Time tick attributed to a subtask that is not startable/in progress."""


class SrlPhase(str, enum.Enum):
    FORETHOUGHT = "forethought"
    PERFORMANCE = "performance"
    REFLECTION = "reflection"


_PHASE_OF_STAGE = {
    TaskStage.INTRODUCTION: SrlPhase.FORETHOUGHT,
    TaskStage.PLANNING: SrlPhase.FORETHOUGHT,
    TaskStage.TASK_PROCESS: SrlPhase.PERFORMANCE,
    TaskStage.REVIEW: SrlPhase.REFLECTION,
}


def current_phase(stage: TaskStage) -> SrlPhase:
    """Total mapping of stages onto Zimmerman phases (orientation is pre-performance)."""
    return _PHASE_OF_STAGE[stage]


def validate_plan(pack: ContentPack, plan: LearningPlan) -> None:
    """Raise unless the plan is a dependency-respecting, fully allocated permutation."""
    all_ids = [s.subtask_id for s in pack.all_subtasks()]
    if sorted(plan.ordering) != sorted(all_ids):
        raise InvalidOrdering("ordering must be a permutation of the session's subtasks")
    position = {sid: i for i, sid in enumerate(plan.ordering)}
    for sid in plan.ordering:
        for dep in effective_dependencies(pack, sid):
            if position[dep] > position[sid]:
                raise InvalidOrdering(f"{sid} is ordered before its dependency {dep}")
    for sid in all_ids:
        minutes = plan.time_allocations.get(sid, 0)
        if minutes < 1:
            raise InvalidAllocation(f"subtask {sid} needs an allocation of at least 1 minute")


def record_plan(s: SessionState, pack: ContentPack, plan: LearningPlan) -> SessionState:
    """Store the learning plan; opens the Planning stage gate."""
    if s.condition is Condition.NO_SRL:
        raise PhaseError("planning is not part of this session condition")
    if s.stage is not TaskStage.PLANNING:
        raise PhaseError(f"plans can only be recorded at the planning stage, not {s.stage.value}")
    validate_plan(pack, plan)
    s.plan = plan
    return s


def tick_time(
    s: SessionState, active_subtask: Optional[str], elapsed_seconds: int
) -> SessionState:
    """Advance the session clock, attributing time to the active subtask if any."""
    if elapsed_seconds <= 0:
        raise ValueError("elapsed_seconds must be positive")
    if active_subtask is not None:
        status = s.subtask_status.get(active_subtask)
        if status not in (SubtaskStatus.AVAILABLE, SubtaskStatus.IN_PROGRESS):
            raise NotActiveError(
                f"subtask {active_subtask!r} is {status and status.value}, not active"
            )
        s.outcome_for(active_subtask).time_spent_seconds += elapsed_seconds
    s.clock += elapsed_seconds
    return s


@dataclass
class TimeBudgetRow:
    subtask_id: str
    allocated_minutes: int
    consumed_seconds: int
    remaining_seconds: int  # negative when over budget, never clamped


@dataclass
class TimeBudgetView:
    rows: list[TimeBudgetRow] = field(default_factory=list)
    allocated_minutes_total: int = 0
    consumed_seconds_total: int = 0
    remaining_seconds_total: int = 0


def time_budget(s: SessionState) -> Optional[TimeBudgetView]:
    """Allocated-versus-consumed view derived from the plan; None before one exists."""
    if s.plan is None:
        return None
    view = TimeBudgetView()
    for sid in s.plan.ordering:
        allocated = s.plan.time_allocations[sid]
        consumed = s.outcomes[sid].time_spent_seconds if sid in s.outcomes else 0
        view.rows.append(
            TimeBudgetRow(
                subtask_id=sid,
                allocated_minutes=allocated,
                consumed_seconds=consumed,
                remaining_seconds=allocated * 60 - consumed,
            )
        )
    view.allocated_minutes_total = sum(r.allocated_minutes for r in view.rows)
    view.consumed_seconds_total = sum(r.consumed_seconds for r in view.rows)
    view.remaining_seconds_total = sum(r.remaining_seconds for r in view.rows)
    return view


@dataclass
class SubtaskMetrics:
    subtask_id: str
    kind: str
    time_spent_seconds: int
    attempts: int
    complete: bool
    quality: dict[str, float]


@dataclass
class MonitorMetrics:
    per_subtask: list[SubtaskMetrics]
    completion_rate: float
    total_attributed_seconds: int
    session_clock: int


def monitor_snapshot(s: SessionState, pack: ContentPack) -> MonitorMetrics:
    """Pure projection of progression metrics; safe to call at any stage."""
    per_subtask = []
    complete_count = 0
    for sub in pack.all_subtasks():
        sid = sub.subtask_id
        outcome = s.outcomes.get(sid)
        is_complete = s.subtask_status[sid] is SubtaskStatus.COMPLETE
        complete_count += int(is_complete)
        per_subtask.append(
            SubtaskMetrics(
                subtask_id=sid,
                kind=sub.kind.value,
                time_spent_seconds=outcome.time_spent_seconds if outcome else 0,
                attempts=outcome.attempts if outcome else 0,
                complete=is_complete,
                quality=dict(outcome.quality) if outcome else {},
            )
        )
    total = len(per_subtask)
    return MonitorMetrics(
        per_subtask=per_subtask,
        completion_rate=(complete_count / total) if total else 0.0,
        total_attributed_seconds=sum(m.time_spent_seconds for m in per_subtask),
        session_clock=s.clock,
    )
