"""Session service: command handling, event-sourced persistence, views, HTTP surface.

Every command validates against the live state, then applies its effects through
the same apply_event reducer that replay uses, and only persists the record once
the apply succeeded. Replaying an exported log therefore reconstructs the live
state by construction, not by luck.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from . import agents, engine, gateway, srl
from .assessment import AssessmentError, Instrument, ResponseSheet, ScoreReport, score_sheet
from .content import AgentKind, ContentPack, QuestionForm, SubtaskDef, SubtaskKind, session_subtask_order
from .engine import Condition, LearningPlan, SessionState, SubtaskStatus, TaskStage
from .events import EventStore, SessionEvent, state_to_doc

PLAN_CHANNEL = "plan"
REFLECTION_CHANNEL = "reflection"


def subtask_channel(subtask_id: str) -> str:
    return f"subtask:{subtask_id}"


class ServiceError(Exception):
    """Base class for service-layer failures."""


class UnknownSession(ServiceError):
    pass


class UnknownPack(ServiceError):
    pass


class UnknownInstrument(ServiceError):
    pass


class DuplicateSession(ServiceError):
    pass


class InvalidRequest(ServiceError):
    """Payload is structurally fine but names things that do not exist."""


@dataclass
class ServiceConfig:
    data_dir: Union[str, Path]
    gateway: gateway.ProviderConfig = field(default_factory=gateway.ProviderConfig)
    snapshot_every: int = 50


# ---------------------------------------------------------------------------
# event reducer


def apply_event(
    state: Optional[SessionState], pack: ContentPack, event: SessionEvent
) -> SessionState:
    """Apply one event; raises (leaving state unmutated) if it is not legal."""
    kind = event.kind
    payload = event.payload
    if kind == "session_started":
        state = engine.start_session(pack, Condition(payload["condition"]), event.session_id)
    elif state is None:
        raise ValueError("first event must be session_started")
    elif kind == "stage_advanced":
        engine.advance_stage(state, pack)
    elif kind == "plan_recorded":
        srl.record_plan(
            state,
            pack,
            LearningPlan(
                ordering=list(payload["ordering"]),
                time_allocations={k: int(v) for k, v in payload["time_allocations"].items()},
                strategy_note=payload.get("strategy_note", ""),
                source=payload.get("source", "learner_edited"),
            ),
        )
    elif kind == "subtask_started":
        engine.start_subtask(state, payload["subtask_id"])
    elif kind == "subtask_submitted":
        engine.apply_submission(state, pack, payload["subtask_id"], payload["submission"])
    elif kind == "subtask_completed":
        engine.mark_complete(state, pack, payload["subtask_id"])
    elif kind == "agent_prompted":
        state.transcript(payload["channel"]).append(
            engine.ChatTurn(role="user", text=payload["text"])
        )
    elif kind == "agent_replied":
        state.transcript(payload["channel"]).append(
            engine.ChatTurn(role="assistant", text=payload["text"])
        )
    elif kind == "time_ticked":
        srl.tick_time(state, payload.get("active_subtask"), payload["elapsed_seconds"])
    elif kind == "assessment_scored":
        state.assessments.append(dict(payload))
    else:
        raise ValueError(f"unknown event kind {kind!r}")
    state.event_seq = event.event_seq
    return state


def replay_events(pack: ContentPack, events: list[SessionEvent]) -> SessionState:
    """Fold a complete event log back into a SessionState."""
    state: Optional[SessionState] = None
    for event in events:
        state = apply_event(state, pack, event)
    if state is None:
        raise ValueError("empty event log")
    return state


# ---------------------------------------------------------------------------
# application core


class SessionApp:
    """The service's command/query core, independent of any HTTP framework."""

    def __init__(
        self,
        packs: Mapping[str, ContentPack],
        config: ServiceConfig,
        instruments: Optional[Mapping[str, Instrument]] = None,
    ):
        self.packs = dict(packs)
        self.config = config
        self.instruments = dict(instruments or {})
        self.store = EventStore(config.data_dir)
        self._states: dict[str, SessionState] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._registry_lock = threading.Lock()

    # -- session plumbing

    def _lock(self, session_id: str) -> threading.RLock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.RLock())

    def _state(self, session_id: str) -> SessionState:
        state = self._states.get(session_id)
        if state is None:
            if not self.store.exists(session_id):
                raise UnknownSession(session_id)
            events = self.store.read(session_id)
            pack = self._pack_for(events[0].payload["pack_id"])
            state = replay_events(pack, events)
            self._states[session_id] = state
        return state

    def _pack_for(self, pack_id: str) -> ContentPack:
        pack = self.packs.get(pack_id)
        if pack is None:
            raise UnknownPack(pack_id)
        return pack

    def _pack(self, state: SessionState) -> ContentPack:
        return self.packs[state.pack_id]

    def _emit(self, state: SessionState, pack: ContentPack, kind: str, payload: dict) -> SessionEvent:
        event = SessionEvent(
            event_seq=state.event_seq + 1,
            session_id=state.session_id,
            timestamp=state.clock,
            kind=kind,
            payload=payload,
        )
        apply_event(state, pack, event)  # raises before any persistence on violation
        self.store.append(event)
        if self.config.snapshot_every and event.event_seq % self.config.snapshot_every == 0:
            self.store.write_snapshot(state.session_id, state_to_doc(state), event.event_seq)
        return event

    # -- commands

    def open_session(
        self, pack_id: str, condition: Union[str, Condition], session_id: Optional[str] = None
    ) -> str:
        pack = self._pack_for(pack_id)
        condition = Condition(condition)
        session_id = session_id or uuid.uuid4().hex
        with self._lock(session_id):
            if session_id in self._states or self.store.exists(session_id):
                raise DuplicateSession(session_id)
            event = SessionEvent(
                event_seq=1,
                session_id=session_id,
                timestamp=0,
                kind="session_started",
                payload={"pack_id": pack_id, "condition": condition.value},
            )
            state = apply_event(None, pack, event)
            self._states[session_id] = state
            self.store.append(event)
        return session_id

    def advance(self, session_id: str) -> dict[str, Any]:
        with self._lock(session_id):
            state = self._state(session_id)
            pack = self._pack(state)
            before = state.stage
            self._emit(state, pack, "stage_advanced", {"from": before.value, "to": engine.next_stage(state).value})
            return {"stage": state.stage.value, "previous": before.value}

    def start_subtask(self, session_id: str, subtask_id: str) -> dict[str, Any]:
        with self._lock(session_id):
            state = self._state(session_id)
            pack = self._pack(state)
            if not pack.has_subtask(subtask_id):
                raise InvalidRequest(f"unknown subtask {subtask_id!r}")
            self._emit(state, pack, "subtask_started", {"subtask_id": subtask_id})
            return {"subtask_id": subtask_id, "status": state.subtask_status[subtask_id].value}

    def submit_subtask(self, session_id: str, subtask_id: str, submission: Mapping[str, Any]) -> dict[str, Any]:
        with self._lock(session_id):
            state = self._state(session_id)
            pack = self._pack(state)
            if not pack.has_subtask(subtask_id):
                raise InvalidRequest(f"unknown subtask {subtask_id!r}")
            sub = pack.subtask(subtask_id)
            self._emit(
                state, pack, "subtask_submitted",
                {"subtask_id": subtask_id, "submission": dict(submission)},
            )
            outcome = state.outcomes[subtask_id]
            completed = engine.evaluate_completion(sub.completion, outcome, sub.kind)
            if completed:
                self._emit(
                    state, pack, "subtask_completed",
                    {"subtask_id": subtask_id, "outcome": {
                        "time_spent_seconds": outcome.time_spent_seconds,
                        "attempts": outcome.attempts,
                        "quality": dict(outcome.quality),
                    }},
                )
            return {
                "subtask_id": subtask_id,
                "completed": completed,
                "attempts": outcome.attempts,
                "quality": dict(outcome.quality),
                "status": state.subtask_status[subtask_id].value,
            }

    def tick(self, session_id: str, seconds: int, active_subtask: Optional[str] = None) -> dict[str, Any]:
        with self._lock(session_id):
            state = self._state(session_id)
            pack = self._pack(state)
            if active_subtask is not None and not pack.has_subtask(active_subtask):
                raise InvalidRequest(f"unknown subtask {active_subtask!r}")
            self._emit(
                state, pack, "time_ticked",
                {"active_subtask": active_subtask, "elapsed_seconds": seconds},
            )
            return {"clock": state.clock}

    def plan(self, session_id: str, body: Mapping[str, Any]) -> dict[str, Any]:
        """Planning-stage endpoint: agent suggestion or plan recording."""
        action = body.get("action", "record")
        if action == "suggest":
            return self._plan_suggest(session_id)
        if action != "record":
            raise InvalidRequest(f"unknown plan action {action!r}")
        with self._lock(session_id):
            state = self._state(session_id)
            pack = self._pack(state)
            ordering = body.get("ordering")
            if not ordering:
                ordering = session_subtask_order(pack)
            minutes = body.get("minutes")
            if not minutes:
                minutes = {s.subtask_id: s.estimated_minutes for s in pack.all_subtasks()}
            plan = LearningPlan(
                ordering=list(ordering),
                time_allocations={k: int(v) for k, v in minutes.items()},
                strategy_note=body.get("strategy_note", ""),
                source=body.get("source", "learner_edited"),
            )
            # surface phase/condition errors before ordering errors, like record_plan does
            self._emit(
                state, pack, "plan_recorded",
                {
                    "ordering": plan.ordering,
                    "time_allocations": plan.time_allocations,
                    "strategy_note": plan.strategy_note,
                    "source": plan.source,
                },
            )
            return {"recorded": True, "ordering": plan.ordering}

    def _plan_suggest(self, session_id: str) -> dict[str, Any]:
        with self._lock(session_id):
            state = self._state(session_id)
            pack = self._pack(state)
            agents.select_agent(state, agents.PLAN_REQUEST)
            ordered = [pack.subtask(sid) for sid in session_subtask_order(pack)]
            ctx = agents.AgentContext(
                chat_history=list(state.transcripts.get(PLAN_CHANNEL, [])),
                subtasks=ordered,
            )
            bundle = agents.assemble_prompt(AgentKind.PLANNING, ctx, pack)
            raw, parsed = self._planning_roundtrip(bundle, len(ordered))
            self._emit(state, pack, "agent_prompted", {
                "agent": AgentKind.PLANNING.value, "channel": PLAN_CHANNEL, "text": bundle.user_text,
            })
            self._emit(state, pack, "agent_replied", {
                "agent": AgentKind.PLANNING.value, "channel": PLAN_CHANNEL, "text": raw,
                "word_count": len(raw.split()), "parsed": parsed,
            })
            if parsed is None:
                suggestion = [s.subtask_id for s in ordered]
                source = "fallback"
            else:
                suggestion = [ordered[i - 1].subtask_id for i in parsed]
                source = "agent"
            return {"suggestion": suggestion, "source": source, "reply": raw}

    def _planning_roundtrip(self, bundle: agents.PromptBundle, n: int) -> tuple[str, Optional[list[int]]]:
        """One completion, one corrective retry, then the caller falls back."""
        messages = [
            gateway.ChatMessage("system", bundle.system_text),
            gateway.ChatMessage("user", bundle.user_text),
        ]
        raw = gateway.complete(messages, self.config.gateway).text
        try:
            return raw, agents.parse_planning_reply(raw, n)
        except (agents.MissingTags, agents.NotPermutation):
            pass
        retry = messages + [
            gateway.ChatMessage("assistant", raw),
            gateway.ChatMessage(
                "user",
                "Your reply must contain a <START>/<END> block holding a comma-separated "
                f"permutation of 1..{n}. Please answer again in the required format.",
            ),
        ]
        raw2 = gateway.complete(retry, self.config.gateway).text
        try:
            return raw2, agents.parse_planning_reply(raw2, n)
        except (agents.MissingTags, agents.NotPermutation):
            return raw2, None

    def interact(self, session_id: str, body: Mapping[str, Any]) -> dict[str, Any]:
        """Chat-style interactions: hints, discussion, writing help, reflection."""
        interaction = body.get("interaction")
        if interaction == agents.PLAN_REQUEST:
            return self._plan_suggest(session_id)
        with self._lock(session_id):
            state = self._state(session_id)
            pack = self._pack(state)
            agent = agents.select_agent(state, interaction)
            if agent is AgentKind.QUIZ_TUTOR:
                return self._quiz_help(state, pack, body)
            if agent is AgentKind.CHATTING:
                return self._discussion(state, pack, body)
            if agent is AgentKind.PAPER_REVIEW:
                return self._paper_help(state, pack, body)
            if agent is AgentKind.WRITING:
                return self._writing_help(state, pack, body)
            return self._reflection(state, pack, body)

    # -- per-agent interaction handlers (called under the session lock)

    def _active_subtask(self, state: SessionState, pack: ContentPack, body: Mapping[str, Any],
                        kind: SubtaskKind) -> SubtaskDef:
        subtask_id = body.get("subtask_id") or ""
        if not pack.has_subtask(subtask_id):
            raise InvalidRequest(f"unknown subtask {subtask_id!r}")
        sub = pack.subtask(subtask_id)
        if sub.kind is not kind:
            raise InvalidRequest(f"subtask {subtask_id!r} is {sub.kind.value}, expected {kind.value}")
        status = state.subtask_status[subtask_id]
        if status not in (SubtaskStatus.AVAILABLE, SubtaskStatus.IN_PROGRESS):
            raise engine.NotAvailableError(f"subtask {subtask_id!r} is {status.value}")
        return sub

    def _complete_channel(self, state: SessionState, pack: ContentPack, agent: AgentKind,
                          channel: str, bundle: agents.PromptBundle) -> str:
        messages = [
            gateway.ChatMessage("system", bundle.system_text),
            gateway.ChatMessage("user", bundle.user_text),
        ]
        raw = gateway.complete(messages, self.config.gateway).text
        if bundle.reply_word_limit:
            def reask(_previous: str) -> Optional[str]:
                follow_up = messages + [
                    gateway.ChatMessage("assistant", _previous),
                    gateway.ChatMessage(
                        "user",
                        f"Please shorten that reply to at most {bundle.reply_word_limit} words.",
                    ),
                ]
                return gateway.complete(follow_up, self.config.gateway).text

            budgeted = agents.enforce_reply_budget(agent, raw, bundle.reply_word_limit, reask)
        else:
            budgeted = raw
        self._emit(state, pack, "agent_prompted", {
            "agent": agent.value, "channel": channel, "text": bundle.user_text,
        })
        self._emit(state, pack, "agent_replied", {
            "agent": agent.value, "channel": channel, "text": budgeted,
            "word_count": len(budgeted.split()),
        })
        return budgeted

    def _quiz_help(self, state: SessionState, pack: ContentPack, body: Mapping[str, Any]) -> dict:
        sub = self._active_subtask(state, pack, body, SubtaskKind.QUIZ)
        question_id = body.get("question_id") or ""
        questions = {q.question_id: q for q in pack.quiz_questions(sub.subtask_id)}
        if question_id not in questions:
            raise InvalidRequest(f"question {question_id!r} is not part of this quiz")
        channel = subtask_channel(sub.subtask_id)
        outcome = state.outcomes.get(sub.subtask_id)
        attempts = outcome.attempts if outcome else 0
        if state.assistant_turns(channel) >= attempts:
            raise agents.HintLimitError("one hint per failed attempt; submit first")
        bundle = agents.quiz_hint_request(
            questions[question_id], body.get("attempt"), pack,
            chat_history=state.transcripts.get(channel, []),
        )
        reply = self._complete_channel(state, pack, AgentKind.QUIZ_TUTOR, channel, bundle)
        return {"reply": reply, "channel": channel}

    def _discussion(self, state: SessionState, pack: ContentPack, body: Mapping[str, Any]) -> dict:
        sub = self._active_subtask(state, pack, body, SubtaskKind.DISCUSSION)
        text = (body.get("text") or "").strip()
        if not text:
            raise InvalidRequest("discussion message needs text")
        channel = subtask_channel(sub.subtask_id)
        ctx = agents.AgentContext(
            chat_history=list(state.transcripts.get(channel, [])),
            persona=pack.persona(sub.content_ref),
            user_question=text,
        )
        bundle = agents.assemble_prompt(AgentKind.CHATTING, ctx, pack)
        reply = self._complete_channel(state, pack, AgentKind.CHATTING, channel, bundle)
        return {"reply": reply, "channel": channel, "chat_turns": state.user_turns(channel)}

    def _paper_help(self, state: SessionState, pack: ContentPack, body: Mapping[str, Any]) -> dict:
        sub = self._active_subtask(state, pack, body, SubtaskKind.REVIEW)
        channel = subtask_channel(sub.subtask_id)
        ctx = agents.AgentContext(
            chat_history=list(state.transcripts.get(channel, [])),
            review_question=body.get("text"),
            review_summary=body.get("summary"),
            paper=pack.paper(sub.content_ref),
        )
        bundle = agents.assemble_prompt(AgentKind.PAPER_REVIEW, ctx, pack)
        reply = self._complete_channel(state, pack, AgentKind.PAPER_REVIEW, channel, bundle)
        return {"reply": reply, "channel": channel}

    def _writing_help(self, state: SessionState, pack: ContentPack, body: Mapping[str, Any]) -> dict:
        sub = self._active_subtask(state, pack, body, SubtaskKind.REPORT)
        channel = subtask_channel(sub.subtask_id)
        ctx = agents.AgentContext(
            chat_history=list(state.transcripts.get(channel, [])),
            writing_title=body.get("title"),
            writing_body=body.get("body"),
            writing_question=body.get("text"),
            previous_outcomes=agents.previous_outcome_lines(state, pack),
        )
        bundle = agents.assemble_prompt(AgentKind.WRITING, ctx, pack)
        reply = self._complete_channel(state, pack, AgentKind.WRITING, channel, bundle)
        return {"reply": reply, "channel": channel}

    def _reflection(self, state: SessionState, pack: ContentPack, body: Mapping[str, Any]) -> dict:
        task_id = body.get("task_id")
        if task_id is None:
            if len(pack.tasks) == 1:
                task = pack.tasks[0]
            else:
                raise InvalidRequest("reflection_request needs a task_id for multi-task packs")
        else:
            try:
                task = pack.task(task_id)
            except KeyError:
                raise InvalidRequest(f"unknown task {task_id!r}") from None
        ctx = agents.AgentContext(
            chat_history=list(state.transcripts.get(REFLECTION_CHANNEL, [])),
            task=task,
            outcome_lines=agents.reflection_outcome_lines(state, task),
        )
        bundle = agents.assemble_prompt(AgentKind.REFLECTION, ctx, pack)
        reply = self._complete_channel(state, pack, AgentKind.REFLECTION, REFLECTION_CHANNEL, bundle)
        return {"reply": reply, "channel": REFLECTION_CHANNEL}

    def score_assessment(self, instrument_id: str, body: Mapping[str, Any]) -> dict[str, Any]:
        instrument = self.instruments.get(instrument_id)
        if instrument is None:
            raise UnknownInstrument(instrument_id)
        sheet = ResponseSheet(
            instrument_id=instrument_id,
            responses=list(body.get("responses") or []),
            respondent_id=body.get("respondent_id", "anonymous"),
        )
        report = score_sheet(instrument, sheet)
        session_id = body.get("session_id")
        if session_id:
            with self._lock(session_id):
                state = self._state(session_id)
                pack = self._pack(state)
                self._emit(state, pack, "assessment_scored", _report_payload(report))
        return _report_payload(report)

    # -- queries

    def get_view(self, session_id: str) -> dict[str, Any]:
        with self._lock(session_id):
            state = self._state(session_id)
            pack = self._pack(state)
            return build_view(state, pack)

    def export_events(self, session_id: str) -> str:
        with self._lock(session_id):
            self._state(session_id)  # 404 on unknown
            return self.store.export_text(session_id)

    def events(self, session_id: str) -> list[SessionEvent]:
        with self._lock(session_id):
            self._state(session_id)
            return self.store.read(session_id)


def _report_payload(report: ScoreReport) -> dict[str, Any]:
    return {
        "instrument_id": report.instrument_id,
        "respondent_id": report.respondent_id,
        "overall": report.overall,
        "subscales": report.subscales,
        "correct_count": report.correct_count,
    }


# ---------------------------------------------------------------------------
# view model


def _question_view(question) -> dict[str, Any]:
    """Learner-facing question payload: stems and choices, never answer keys."""
    doc: dict[str, Any] = {
        "id": question.question_id,
        "form": question.form.value,
        "stem": question.stem,
    }
    if question.form is QuestionForm.MATCHING:
        doc["left"] = sorted((question.pairs or {}).keys())
        doc["right"] = sorted((question.pairs or {}).values())
    elif question.form is QuestionForm.MULTIPLE_CHOICE:
        doc["options"] = list(question.options or [])
    elif question.form is QuestionForm.ORDERING:
        doc["pool"] = sorted(question.items or [])
    else:
        doc["statement"] = question.statement
    return doc


def _subtask_content(pack: ContentPack, sub: SubtaskDef) -> dict[str, Any]:
    if sub.kind is SubtaskKind.QUIZ:
        return {"questions": [_question_view(q) for q in pack.quiz_questions(sub.subtask_id)]}
    if sub.kind in (SubtaskKind.DISCUSSION, SubtaskKind.INSIGHT):
        persona = pack.persona(sub.content_ref)
        return {"persona": {
            "professor_name": persona.professor_name,
            "department": persona.department,
            "university": persona.university,
            "research_field": persona.research_field,
        }}
    paper = pack.paper(sub.content_ref) if sub.content_ref in {p.paper_id for p in pack.papers} else None
    if paper is None:
        return {}
    return {"paper": {"id": paper.paper_id, "title": paper.title, "abstract": paper.abstract, "body": paper.body}}


def build_view(state: SessionState, pack: ContentPack) -> dict[str, Any]:
    """ViewModel projection; SRL panels exist only under the full condition."""
    srl_on = state.condition is Condition.FULL_SRL
    subtasks = []
    for sid in session_subtask_order(pack):
        sub = pack.subtask(sid)
        status = state.subtask_status[sid]
        row: dict[str, Any] = {
            "id": sid,
            "kind": sub.kind.value,
            "title": sub.title,
            "description": sub.description,
            "status": status.value,
            "estimated_minutes": sub.estimated_minutes,
        }
        if status is not SubtaskStatus.LOCKED:
            row["content"] = _subtask_content(pack, sub)
            outcome = state.outcomes.get(sid)
            if outcome:
                row["attempts"] = outcome.attempts
                row["quality"] = dict(outcome.quality)
                row["time_spent_seconds"] = outcome.time_spent_seconds
        subtasks.append(row)
    view: dict[str, Any] = {
        "session_id": state.session_id,
        "pack_id": state.pack_id,
        "condition": state.condition.value,
        "stage": state.stage.value,
        "phase": srl.current_phase(state.stage).value,
        "clock": state.clock,
        "subtasks": subtasks,
        "available": engine.available_subtasks(state, pack),
        "completion_rate": srl.monitor_snapshot(state, pack).completion_rate,
        "transcripts": {
            channel: [{"role": t.role, "text": t.text} for t in turns]
            for channel, turns in state.transcripts.items()
            if turns
        },
    }
    if srl_on:
        if state.plan is not None:
            view["plan"] = {
                "ordering": list(state.plan.ordering),
                "time_allocations": dict(state.plan.time_allocations),
                "strategy_note": state.plan.strategy_note,
                "source": state.plan.source,
            }
        budget = srl.time_budget(state)
        if budget is not None:
            view["time_budget"] = {
                "rows": [
                    {
                        "subtask_id": r.subtask_id,
                        "allocated_minutes": r.allocated_minutes,
                        "consumed_seconds": r.consumed_seconds,
                        "remaining_seconds": r.remaining_seconds,
                    }
                    for r in budget.rows
                ],
                "allocated_minutes_total": budget.allocated_minutes_total,
                "consumed_seconds_total": budget.consumed_seconds_total,
                "remaining_seconds_total": budget.remaining_seconds_total,
            }
        if state.stage is TaskStage.REVIEW:
            reflections = [
                t.text for t in state.transcripts.get(REFLECTION_CHANNEL, []) if t.role == "assistant"
            ]
            if reflections:
                view["reflection_text"] = reflections[-1]
    return view


# ---------------------------------------------------------------------------
# HTTP layer


def create_app(core: SessionApp):
    """FastAPI wrapper over the application core."""
    from fastapi import Body, FastAPI, Request
    from fastapi.responses import JSONResponse, PlainTextResponse
    from fastapi.staticfiles import StaticFiles

    api = FastAPI(title="learning-session service")

    status_of = [
        ((UnknownSession, UnknownPack, UnknownInstrument), 404),
        (
            (
                engine.StageGateError,
                engine.TerminalError,
                engine.NotAvailableError,
                engine.CriteriaError,
                srl.PhaseError,
                srl.NotActiveError,
                agents.FeatureDisabled,
                agents.PhaseMismatch,
                agents.HintLimitError,
                agents.CorrectAnswerError,
                DuplicateSession,
            ),
            409,
        ),
        (
            (
                srl.InvalidOrdering,
                srl.InvalidAllocation,
                engine.IncompatibleRule,
                InvalidRequest,
                AssessmentError,
                ValueError,
            ),
            422,
        ),
        ((gateway.GatewayError,), 502),
    ]

    def http_error(exc: Exception) -> JSONResponse:
        for types, status in status_of:
            if isinstance(exc, types):
                return JSONResponse(
                    status_code=status,
                    content={"error": type(exc).__name__, "detail": str(exc)},
                )
        raise exc

    @api.exception_handler(Exception)
    async def _handle(request: Request, exc: Exception):  # pragma: no cover - wiring
        return http_error(exc)

    def guarded(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Exception as exc:  # translated to a JSON error response
            return http_error(exc)

    @api.post("/sessions")
    def open_session(body: dict = Body(...)):
        def run():
            session_id = core.open_session(
                pack_id=body.get("pack_id", ""),
                condition=body.get("condition", Condition.FULL_SRL.value),
                session_id=body.get("session_id"),
            )
            return {"session_id": session_id}

        return guarded(run)

    @api.get("/sessions/{session_id}/view")
    def get_view(session_id: str):
        return guarded(core.get_view, session_id)

    @api.post("/sessions/{session_id}/advance")
    def advance(session_id: str):
        return guarded(core.advance, session_id)

    @api.post("/sessions/{session_id}/plan")
    def plan(session_id: str, body: dict = Body(...)):
        return guarded(core.plan, session_id, body)

    @api.post("/sessions/{session_id}/subtasks/{subtask_id}/start")
    def start(session_id: str, subtask_id: str):
        return guarded(core.start_subtask, session_id, subtask_id)

    @api.post("/sessions/{session_id}/subtasks/{subtask_id}/submit")
    def submit(session_id: str, subtask_id: str, body: dict = Body(...)):
        return guarded(core.submit_subtask, session_id, subtask_id, body)

    @api.post("/sessions/{session_id}/chat")
    def chat(session_id: str, body: dict = Body(...)):
        return guarded(core.interact, session_id, body)

    @api.post("/sessions/{session_id}/tick")
    def tick(session_id: str, body: dict = Body(...)):
        def run():
            seconds = body.get("seconds")
            if not isinstance(seconds, int) or seconds <= 0:
                raise InvalidRequest("seconds must be a positive integer")
            return core.tick(session_id, seconds, body.get("active_subtask"))

        return guarded(run)

    @api.get("/sessions/{session_id}/events")
    def export(session_id: str):
        def run():
            return PlainTextResponse(core.export_events(session_id), media_type="application/x-ndjson")

        return guarded(run)

    @api.post("/assessments/{instrument_id}/score")
    def score(instrument_id: str, body: dict = Body(...)):
        return guarded(core.score_assessment, instrument_id, body)

    @api.get("/packs")
    def packs():
        return {"packs": sorted(core.packs)}

    static_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if static_dir.is_dir():  # serve the web client when its build output exists
        api.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return api
