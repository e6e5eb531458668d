import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srlsession.content import session_subtask_order
from srlsession.engine import Condition, LearningPlan, TaskStage, advance_stage, start_session, start_subtask, submit_subtask
from srlsession.srl import (
    InvalidAllocation,
    InvalidOrdering,
    NotActiveError,
    PhaseError,
    SrlPhase,
    current_phase,
    monitor_snapshot,
    record_plan,
    tick_time,
    time_budget,
    validate_plan,
)

from oracles import is_topological, reference_effective_deps
from packlab import passing_submission, synth_pack_doc
from srlsession.content import parse_pack_document


def default_plan(pack) -> LearningPlan:
    return LearningPlan(
        ordering=session_subtask_order(pack),
        time_allocations={x.subtask_id: x.estimated_minutes for x in pack.all_subtasks()},
    )


def session_in_planning(pack):
    s = start_session(pack, Condition.FULL_SRL, "s1")
    advance_stage(s, pack)
    return s


# ---------------------------------------------------------------------------
# phase mapping


def test_phase_follows_stage(full_pack):
    s = start_session(full_pack, Condition.FULL_SRL, "s1")
    assert current_phase(s.stage) is SrlPhase.FORETHOUGHT
    advance_stage(s, full_pack)
    assert current_phase(s.stage) is SrlPhase.FORETHOUGHT
    record_plan(s, full_pack, default_plan(full_pack))
    advance_stage(s, full_pack)
    assert current_phase(s.stage) is SrlPhase.PERFORMANCE
    assert current_phase(TaskStage.REVIEW) is SrlPhase.REFLECTION


# ---------------------------------------------------------------------------
# plan validation


def test_valid_plan_is_accepted(full_pack):
    s = session_in_planning(full_pack)
    record_plan(s, full_pack, default_plan(full_pack))
    assert s.plan is not None
    assert s.plan.ordering == session_subtask_order(full_pack)


def test_plan_must_be_a_permutation(full_pack):
    s = session_in_planning(full_pack)
    plan = default_plan(full_pack)
    plan.ordering = plan.ordering[:-1]
    with pytest.raises(InvalidOrdering):
        record_plan(s, full_pack, plan)
    plan.ordering = session_subtask_order(full_pack) + ["st-read-primer"]
    with pytest.raises(InvalidOrdering):
        record_plan(s, full_pack, plan)


def test_plan_must_respect_dependencies(full_pack):
    s = session_in_planning(full_pack)
    plan = default_plan(full_pack)
    order = list(plan.ordering)
    i = order.index("st-read-primer")
    j = order.index("st-concept-quiz")
    order[i], order[j] = order[j], order[i]
    plan.ordering = order
    with pytest.raises(InvalidOrdering):
        record_plan(s, full_pack, plan)


def test_plan_needs_positive_allocations(full_pack):
    s = session_in_planning(full_pack)
    plan = default_plan(full_pack)
    plan.time_allocations = {**plan.time_allocations, "st-read-primer": 0}
    with pytest.raises(InvalidAllocation):
        record_plan(s, full_pack, plan)
    plan = default_plan(full_pack)
    del plan.time_allocations["st-report"]
    with pytest.raises(InvalidAllocation):
        record_plan(s, full_pack, plan)


def test_plan_rejected_outside_planning_stage(full_pack):
    s = start_session(full_pack, Condition.FULL_SRL, "s1")
    with pytest.raises(PhaseError):
        record_plan(s, full_pack, default_plan(full_pack))


def test_plan_disabled_without_srl(full_pack):
    s = start_session(full_pack, Condition.NO_SRL, "s1")
    advance_stage(s, full_pack)  # straight to task_process
    with pytest.raises(PhaseError):
        record_plan(s, full_pack, default_plan(full_pack))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_any_dependency_respecting_permutation_is_accepted(seed):
    rng = random.Random(seed)
    doc = synth_pack_doc(rng)
    pack = parse_pack_document(doc)
    ids = [x.subtask_id for x in pack.all_subtasks()]
    deps = {sid: reference_effective_deps(doc, sid) for sid in ids}

    # random topological shuffle (Kahn's algorithm with random tie-breaks)
    remaining = set(ids)
    order = []
    while remaining:
        ready = sorted(sid for sid in remaining if deps[sid] <= set(order))
        pick = rng.choice(ready)
        order.append(pick)
        remaining.discard(pick)
    assert is_topological(order, deps)

    s = session_in_planning(pack)
    plan = LearningPlan(
        ordering=order,
        time_allocations={sid: rng.randint(1, 90) for sid in ids},
    )
    record_plan(s, pack, plan)
    assert s.plan.ordering == order

    # validate_plan is pure: re-validating the stored plan stays fine
    validate_plan(pack, s.plan)


# ---------------------------------------------------------------------------
# time accounting


def build_active_session(pack):
    s = start_session(pack, Condition.FULL_SRL, "s1")
    advance_stage(s, pack)
    record_plan(s, pack, default_plan(pack))
    advance_stage(s, pack)
    return s


def test_tick_attributes_time_and_advances_clock(full_pack):
    s = build_active_session(full_pack)
    start_subtask(s, "st-read-primer")
    tick_time(s, "st-read-primer", 120)
    tick_time(s, "st-read-primer", 30)
    assert s.clock == 150
    assert s.outcome_for("st-read-primer").time_spent_seconds == 150


def test_tick_rejects_nonpositive_and_inactive(full_pack):
    s = build_active_session(full_pack)
    start_subtask(s, "st-read-primer")
    with pytest.raises(ValueError):
        tick_time(s, "st-read-primer", 0)
    with pytest.raises(NotActiveError):
        tick_time(s, "st-concept-quiz", 60)  # still locked
    assert s.clock == 0


def test_time_budget_math(full_pack):
    s = build_active_session(full_pack)
    start_subtask(s, "st-read-primer")
    tick_time(s, "st-read-primer", 700)
    budget = time_budget(s)
    row = next(r for r in budget.rows if r.subtask_id == "st-read-primer")
    assert row.allocated_minutes == 10
    assert row.consumed_seconds == 700
    assert row.remaining_seconds == 10 * 60 - 700  # negative overrun preserved
    assert budget.allocated_minutes_total == sum(r.allocated_minutes for r in budget.rows)
    assert budget.consumed_seconds_total == 700
    assert budget.remaining_seconds_total == budget.allocated_minutes_total * 60 - 700


def test_time_budget_absent_without_plan(full_pack):
    s = start_session(full_pack, Condition.NO_SRL, "s1")
    advance_stage(s, full_pack)
    assert time_budget(s) is None


def test_monitor_snapshot_tracks_completion(full_pack):
    s = build_active_session(full_pack)
    snap = monitor_snapshot(s, full_pack)
    assert snap.completion_rate == 0.0
    start_subtask(s, "st-read-primer")
    submit_subtask(s, full_pack, "st-read-primer", passing_submission(full_pack, "st-read-primer"))
    snap = monitor_snapshot(s, full_pack)
    assert snap.completion_rate == pytest.approx(1 / 8)
    by_id = {m.subtask_id: m for m in snap.per_subtask}
    assert by_id["st-read-primer"].complete
    assert not by_id["st-concept-quiz"].complete
