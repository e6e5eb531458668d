"""Scripted-learner simulation harness.

Runs JSON learner scripts end-to-end against the service core (in-process by
default, over HTTP with a remote client) using the deterministic mock gateway,
then audits the run: the exported event log must replay to the reported state
and every report figure must match an independent fold over that log.
"""

from __future__ import annotations

import json
import statistics
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from . import agents
from .assessment import Instrument, load_instrument
from .content import AgentKind, ContentPack
from .engine import Condition, TaskStage
from .events import SessionEvent, state_to_doc
from .gateway import ProviderConfig
from .service import ServiceConfig, SessionApp, replay_events

SRL_AGENTS = (
    AgentKind.PLANNING,
    AgentKind.QUIZ_TUTOR,
    AgentKind.PAPER_REVIEW,
    AgentKind.WRITING,
    AgentKind.REFLECTION,
)

ACTION_KINDS = (
    "advance",
    "plan_suggest",
    "plan_record",
    "start",
    "tick",
    "submit",
    "chat",
    "respond_instrument",
)


class HarnessError(Exception):
    pass


class ScriptError(HarnessError):
    """An action is illegal for its script/pack/condition; carries the action index."""

    def __init__(self, index: int, message: str):
        super().__init__(f"action {index}: {message}")
        self.index = index


class EmptyGroup(HarnessError):
    """compare_conditions received no reports."""


class InvariantViolation(HarnessError):
    """A run finished but failed the embedded post-run audits."""


@dataclass
class LearnerScript:
    script_id: str
    condition: Condition
    actions: list[dict[str, Any]]
    description: str = ""


@dataclass
class SessionReport:
    script_id: str
    session_id: str
    pack_id: str
    condition: str
    seed: int
    completed: bool
    final_stage: str
    completion_rate: float
    total_time_seconds: int
    per_subtask_seconds: dict[str, int]
    agent_invocations: dict[str, int]
    assessments: list[dict[str, Any]]
    event_count: int
    invariant_failures: list[str] = field(default_factory=list)
    events_jsonl: str = ""  # exported log text, for determinism comparisons

    def to_doc(self) -> dict[str, Any]:
        doc = {
            "script_id": self.script_id,
            "session_id": self.session_id,
            "pack_id": self.pack_id,
            "condition": self.condition,
            "seed": self.seed,
            "completed": self.completed,
            "final_stage": self.final_stage,
            "completion_rate": self.completion_rate,
            "total_time_seconds": self.total_time_seconds,
            "per_subtask_seconds": self.per_subtask_seconds,
            "agent_invocations": self.agent_invocations,
            "assessments": self.assessments,
            "event_count": self.event_count,
            "invariant_failures": self.invariant_failures,
        }
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "SessionReport":
        return cls(
            script_id=doc["script_id"],
            session_id=doc["session_id"],
            pack_id=doc["pack_id"],
            condition=doc["condition"],
            seed=int(doc["seed"]),
            completed=bool(doc["completed"]),
            final_stage=doc["final_stage"],
            completion_rate=float(doc["completion_rate"]),
            total_time_seconds=int(doc["total_time_seconds"]),
            per_subtask_seconds={k: int(v) for k, v in doc["per_subtask_seconds"].items()},
            agent_invocations={k: int(v) for k, v in doc["agent_invocations"].items()},
            assessments=list(doc.get("assessments", [])),
            event_count=int(doc["event_count"]),
            invariant_failures=list(doc.get("invariant_failures", [])),
        )


def load_script(path: Union[str, Path]) -> LearnerScript:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return LearnerScript(
        script_id=doc["script_id"],
        condition=Condition(doc["condition"]),
        actions=list(doc["actions"]),
        description=doc.get("description", ""),
    )


def load_instruments(directory: Union[str, Path]) -> dict[str, Instrument]:
    instruments = {}
    for path in sorted(Path(directory).glob("*.json")):
        instrument = load_instrument(path)
        instruments[instrument.instrument_id] = instrument
    return instruments


def default_instruments_dir() -> Optional[Path]:
    """The repo's instrument fixtures, when running from a source checkout."""
    candidate = Path(__file__).resolve().parents[2] / "fixtures" / "instruments"
    return candidate if candidate.is_dir() else None


# ---------------------------------------------------------------------------
# script validation


def validate_script(script: LearnerScript, pack: ContentPack) -> None:
    """Static legality check: raises ScriptError at the first bad action."""
    known_subtasks = {s.subtask_id for s in pack.all_subtasks()}
    for i, action in enumerate(script.actions):
        kind = action.get("do")
        if kind not in ACTION_KINDS:
            raise ScriptError(i, f"unknown action kind {kind!r}")
        if script.condition is Condition.NO_SRL:
            if kind in ("plan_suggest", "plan_record"):
                raise ScriptError(i, f"{kind} is not legal under the no-SRL condition")
            if kind == "chat" and action.get("interaction") != agents.DISCUSSION_MESSAGE:
                raise ScriptError(
                    i, f"interaction {action.get('interaction')!r} is not legal under the no-SRL condition"
                )
        if kind in ("start", "submit"):
            if action.get("subtask") not in known_subtasks:
                raise ScriptError(i, f"unknown subtask {action.get('subtask')!r}")
        if kind == "tick":
            seconds = action.get("seconds")
            if not isinstance(seconds, int) or seconds <= 0:
                raise ScriptError(i, "tick needs a positive integer 'seconds'")
            active = action.get("active")
            if active is not None and active not in known_subtasks:
                raise ScriptError(i, f"unknown subtask {active!r}")
        if kind == "chat":
            interaction = action.get("interaction")
            if interaction not in agents.INTERACTION_KINDS:
                raise ScriptError(i, f"unknown interaction {interaction!r}")
            needs_subtask = interaction in (
                agents.QUIZ_HELP,
                agents.PAPER_HELP,
                agents.DISCUSSION_MESSAGE,
                agents.WRITING_HELP,
            )
            if needs_subtask and action.get("subtask") not in known_subtasks:
                raise ScriptError(i, f"unknown subtask {action.get('subtask')!r}")
        if kind == "respond_instrument":
            if not action.get("instrument") or not isinstance(action.get("responses"), list):
                raise ScriptError(i, "respond_instrument needs 'instrument' and a response list")


# ---------------------------------------------------------------------------
# service clients


class LocalClient:
    """Direct in-process calls into the application core."""

    def __init__(self, app: SessionApp):
        self.app = app

    def open(self, pack_id: str, condition: str, session_id: str) -> str:
        return self.app.open_session(pack_id, condition, session_id)

    def advance(self, session_id: str) -> dict:
        return self.app.advance(session_id)

    def plan(self, session_id: str, body: dict) -> dict:
        return self.app.plan(session_id, body)

    def start(self, session_id: str, subtask_id: str) -> dict:
        return self.app.start_subtask(session_id, subtask_id)

    def submit(self, session_id: str, subtask_id: str, body: dict) -> dict:
        return self.app.submit_subtask(session_id, subtask_id, body)

    def chat(self, session_id: str, body: dict) -> dict:
        return self.app.interact(session_id, body)

    def tick(self, session_id: str, seconds: int, active: Optional[str]) -> dict:
        return self.app.tick(session_id, seconds, active)

    def score(self, instrument_id: str, body: dict) -> dict:
        return self.app.score_assessment(instrument_id, body)

    def view(self, session_id: str) -> dict:
        return self.app.get_view(session_id)

    def events_text(self, session_id: str) -> str:
        return self.app.export_events(session_id)


class RemoteClient:
    """The same operations over the HTTP surface."""

    def __init__(self, base_url: str, timeout: float = 30.0, http=None):
        if http is None:
            import httpx

            http = httpx.Client(base_url=base_url, timeout=timeout)
        self.http = http

    def _json(self, response) -> dict:
        if response.status_code >= 400:
            raise HarnessError(f"{response.request.method} {response.request.url.path} "
                               f"-> {response.status_code}: {response.text}")
        return response.json()

    def open(self, pack_id: str, condition: str, session_id: str) -> str:
        doc = self._json(self.http.post("/sessions", json={
            "pack_id": pack_id, "condition": condition, "session_id": session_id,
        }))
        return doc["session_id"]

    def advance(self, session_id: str) -> dict:
        return self._json(self.http.post(f"/sessions/{session_id}/advance"))

    def plan(self, session_id: str, body: dict) -> dict:
        return self._json(self.http.post(f"/sessions/{session_id}/plan", json=body))

    def start(self, session_id: str, subtask_id: str) -> dict:
        return self._json(self.http.post(f"/sessions/{session_id}/subtasks/{subtask_id}/start"))

    def submit(self, session_id: str, subtask_id: str, body: dict) -> dict:
        return self._json(self.http.post(f"/sessions/{session_id}/subtasks/{subtask_id}/submit", json=body))

    def chat(self, session_id: str, body: dict) -> dict:
        return self._json(self.http.post(f"/sessions/{session_id}/chat", json=body))

    def tick(self, session_id: str, seconds: int, active: Optional[str]) -> dict:
        return self._json(self.http.post(f"/sessions/{session_id}/tick", json={
            "seconds": seconds, "active_subtask": active,
        }))

    def score(self, instrument_id: str, body: dict) -> dict:
        return self._json(self.http.post(f"/assessments/{instrument_id}/score", json=body))

    def view(self, session_id: str) -> dict:
        return self._json(self.http.get(f"/sessions/{session_id}/view"))

    def events_text(self, session_id: str) -> str:
        response = self.http.get(f"/sessions/{session_id}/events")
        if response.status_code >= 400:
            raise HarnessError(f"GET events -> {response.status_code}")
        return response.text


# ---------------------------------------------------------------------------
# the run loop


def _submission_body(action: Mapping[str, Any]) -> dict[str, Any]:
    body = {}
    for key in ("answers", "text", "summary", "goal"):
        if key in action:
            body[key] = action[key]
    return body


def _chat_body(action: Mapping[str, Any]) -> dict[str, Any]:
    body = {"interaction": action["interaction"]}
    for key in ("subtask", "question_id", "attempt", "text", "summary", "title", "body", "task_id"):
        if key in action:
            body["subtask_id" if key == "subtask" else key] = action[key]
    return body


def run_script(
    script: LearnerScript,
    pack: ContentPack,
    seed: int,
    client=None,
    instruments: Optional[Mapping[str, Instrument]] = None,
    session_id: Optional[str] = None,
    check_invariants: bool = True,
) -> SessionReport:
    """Run one scripted learner to completion (or abandonment) and audit the log.

    With no client given, a private in-process service is created whose mock
    gateway is seeded with `seed`, which makes the whole run a deterministic
    function of (script, pack, seed) down to the event log bytes.
    """
    validate_script(script, pack)
    session_id = session_id or f"{script.script_id}-{seed}"
    tempdir: Optional[tempfile.TemporaryDirectory] = None
    if client is None:
        tempdir = tempfile.TemporaryDirectory(prefix="srlsession-run-")
        app = SessionApp(
            packs={pack.pack_id: pack},
            config=ServiceConfig(
                data_dir=tempdir.name,
                gateway=ProviderConfig(seed=seed),
            ),
            instruments=instruments or {},
        )
        client = LocalClient(app)
    try:
        client.open(pack.pack_id, script.condition.value, session_id)
        assessments: list[dict[str, Any]] = []
        for i, action in enumerate(script.actions):
            try:
                kind = action["do"]
                if kind == "advance":
                    client.advance(session_id)
                elif kind == "plan_suggest":
                    client.plan(session_id, {"action": "suggest"})
                elif kind == "plan_record":
                    body = {"action": "record"}
                    for key in ("ordering", "minutes", "strategy_note", "source"):
                        if key in action:
                            body[key] = action[key]
                    client.plan(session_id, body)
                elif kind == "start":
                    client.start(session_id, action["subtask"])
                elif kind == "submit":
                    client.submit(session_id, action["subtask"], _submission_body(action))
                elif kind == "tick":
                    client.tick(session_id, action["seconds"], action.get("active"))
                elif kind == "chat":
                    client.chat(session_id, _chat_body(action))
                else:  # respond_instrument
                    report = client.score(action["instrument"], {
                        "responses": action["responses"],
                        "respondent_id": action.get("respondent", session_id),
                        "session_id": session_id,
                    })
                    assessments.append(report)
            except HarnessError:
                raise
            except Exception as exc:
                raise ScriptError(i, f"{type(exc).__name__}: {exc}") from exc
        view = client.view(session_id)
        events_text = client.events_text(session_id)
        report = _build_report(script, seed, view, events_text, assessments)
        if check_invariants:
            report.invariant_failures = audit_run(report, pack, events_text)
        return report
    finally:
        if tempdir is not None:
            tempdir.cleanup()


def _build_report(
    script: LearnerScript,
    seed: int,
    view: Mapping[str, Any],
    events_text: str,
    assessments: list[dict[str, Any]],
) -> SessionReport:
    events = _parse_events(events_text)
    invocations = {agent.value: 0 for agent in AgentKind}
    for event in events:
        if event.kind == "agent_replied":
            invocations[event.payload["agent"]] += 1
    per_subtask = {
        row["id"]: int(row.get("time_spent_seconds", 0)) for row in view["subtasks"]
    }
    return SessionReport(
        script_id=script.script_id,
        session_id=view["session_id"],
        pack_id=view["pack_id"],
        condition=view["condition"],
        seed=seed,
        completed=view["stage"] == TaskStage.REVIEW.value,
        final_stage=view["stage"],
        completion_rate=float(view["completion_rate"]),
        total_time_seconds=int(view["clock"]),
        per_subtask_seconds=per_subtask,
        agent_invocations=invocations,
        assessments=assessments,
        event_count=len(events),
        events_jsonl=events_text,
    )


def _parse_events(events_text: str) -> list[SessionEvent]:
    return [
        SessionEvent.from_json(line)
        for line in events_text.splitlines()
        if line.strip()
    ]


# ---------------------------------------------------------------------------
# embedded post-run audits


def audit_run(report: SessionReport, pack: ContentPack, events_text: str) -> list[str]:
    """Replay, purity, and metric-consistency checks; returns failure messages."""
    failures: list[str] = []
    events = _parse_events(events_text)

    # replay soundness: the exported log folds to the state the view reported
    state = replay_events(pack, events)
    doc = state_to_doc(state)
    if doc["stage"] != report.final_stage:
        failures.append(f"replayed stage {doc['stage']} != reported {report.final_stage}")
    if doc["clock"] != report.total_time_seconds:
        failures.append(f"replayed clock {doc['clock']} != reported {report.total_time_seconds}")

    # independent event folds
    total = len(pack.all_subtasks())
    completed_ids = {e.payload["subtask_id"] for e in events if e.kind == "subtask_completed"}
    rate = len(completed_ids) / total if total else 0.0
    if abs(rate - report.completion_rate) > 1e-9:
        failures.append(f"completion_rate fold {rate} != reported {report.completion_rate}")
    clock = sum(e.payload["elapsed_seconds"] for e in events if e.kind == "time_ticked")
    if clock != report.total_time_seconds:
        failures.append(f"clock fold {clock} != reported {report.total_time_seconds}")
    per_subtask: dict[str, int] = {}
    for event in events:
        if event.kind == "time_ticked" and event.payload.get("active_subtask"):
            sid = event.payload["active_subtask"]
            per_subtask[sid] = per_subtask.get(sid, 0) + event.payload["elapsed_seconds"]
    for sid, seconds in per_subtask.items():
        if report.per_subtask_seconds.get(sid, 0) != seconds:
            failures.append(
                f"per-subtask fold {sid}={seconds} != reported {report.per_subtask_seconds.get(sid, 0)}"
            )
    replies = {agent.value: 0 for agent in AgentKind}
    for event in events:
        if event.kind == "agent_replied":
            replies[event.payload["agent"]] += 1
    if replies != report.agent_invocations:
        failures.append(f"agent fold {replies} != reported {report.agent_invocations}")

    # condition purity
    if report.condition == Condition.NO_SRL.value:
        for agent in SRL_AGENTS:
            if report.agent_invocations.get(agent.value, 0):
                failures.append(f"no-SRL run invoked {agent.value}")
        if any(e.kind == "plan_recorded" for e in events):
            failures.append("no-SRL run recorded a plan")
        if any(e.kind == "stage_advanced" and e.payload.get("to") == "planning" for e in events):
            failures.append("no-SRL run entered the planning stage")

    # event_seq integrity
    seqs = [e.event_seq for e in events]
    if seqs != list(range(1, len(seqs) + 1)):
        failures.append("event_seq is not 1..n")
    return failures


# ---------------------------------------------------------------------------
# condition comparison


def _group_metrics(reports: list[SessionReport]) -> dict[str, list[float]]:
    metrics: dict[str, list[float]] = {
        "completion_rate": [r.completion_rate for r in reports],
        "total_time_seconds": [float(r.total_time_seconds) for r in reports],
    }
    for report in reports:
        for assessment in report.assessments:
            overall = assessment.get("overall")
            if overall is None:
                continue
            key = f"{assessment['instrument_id']}_overall"
            metrics.setdefault(key, []).append(float(overall))
    return metrics


def compare_conditions(reports: list[SessionReport]) -> list[dict[str, Any]]:
    """Per-condition mean and population SD of completion, time, and assessments."""
    if not reports:
        raise EmptyGroup("no reports to compare")
    by_condition: dict[str, list[SessionReport]] = {}
    for report in reports:
        by_condition.setdefault(report.condition, []).append(report)
    rows = []
    for condition in sorted(by_condition):
        group = by_condition[condition]
        row: dict[str, Any] = {"condition": condition, "n": len(group)}
        for metric, values in sorted(_group_metrics(group).items()):
            row[f"{metric}_mean"] = statistics.mean(values)
            row[f"{metric}_sd"] = statistics.pstdev(values)
        rows.append(row)
    return rows


def comparison_to_csv(rows: list[dict[str, Any]]) -> str:
    import csv
    import io

    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=columns, restval="")
    writer.writeheader()
    for row in rows:
        formatted = {
            k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in row.items()
        }
        writer.writerow(formatted)
    return out.getvalue()
