"""Append-only session event log and state (de)serialization.

One JSONL file per session; records serialize with sorted keys and fixed
separators so identical histories are byte-identical on disk. Replaying a log
through the reducer in service.py reconstructs the exact SessionState.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Optional, Union

from .engine import (
    ChatTurn,
    Condition,
    LearningPlan,
    SessionState,
    SubtaskOutcome,
    SubtaskStatus,
    TaskStage,
)

EVENT_KINDS = (
    "session_started",
    "stage_advanced",
    "plan_recorded",
    "subtask_started",
    "subtask_submitted",
    "subtask_completed",
    "agent_prompted",
    "agent_replied",
    "time_ticked",
    "assessment_scored",
)


@dataclass
class SessionEvent:
    event_seq: int
    session_id: str
    timestamp: int  # session clock seconds at emission
    kind: str
    payload: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "event_seq": self.event_seq,
            "session_id": self.session_id,
            "timestamp": self.timestamp,
            "kind": self.kind,
            "payload": self.payload,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "SessionEvent":
        doc = json.loads(line)
        return cls(
            event_seq=doc["event_seq"],
            session_id=doc["session_id"],
            timestamp=doc["timestamp"],
            kind=doc["kind"],
            payload=doc["payload"],
        )


class EventStore:
    """Per-session JSONL files under a data directory, plus periodic snapshots."""

    def __init__(self, data_dir: Union[str, Path]):
        self.data_dir = Path(data_dir)
        (self.data_dir / "sessions").mkdir(parents=True, exist_ok=True)

    def log_path(self, session_id: str) -> Path:
        return self.data_dir / "sessions" / f"{session_id}.jsonl"

    def snapshot_path(self, session_id: str) -> Path:
        return self.data_dir / "sessions" / f"{session_id}.snapshot.json"

    def exists(self, session_id: str) -> bool:
        return self.log_path(session_id).exists()

    def append(self, event: SessionEvent) -> None:
        with self.log_path(event.session_id).open("a", encoding="utf-8") as handle:
            handle.write(event.to_json() + "\n")

    def read(self, session_id: str) -> list[SessionEvent]:
        return list(self.iter_events(session_id))

    def iter_events(self, session_id: str) -> Iterator[SessionEvent]:
        path = self.log_path(session_id)
        if not path.exists():
            return
        with path.open("r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    yield SessionEvent.from_json(line)

    def export_text(self, session_id: str) -> str:
        return self.log_path(session_id).read_text(encoding="utf-8")

    def write_snapshot(self, session_id: str, state_doc: dict[str, Any], at_seq: int) -> None:
        doc = {"at_seq": at_seq, "state": state_doc}
        self.snapshot_path(session_id).write_text(
            json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8"
        )

    def list_sessions(self) -> list[str]:
        return sorted(p.stem for p in (self.data_dir / "sessions").glob("*.jsonl"))


# ---------------------------------------------------------------------------
# SessionState <-> JSON document


def state_to_doc(s: SessionState) -> dict[str, Any]:
    return {
        "session_id": s.session_id,
        "pack_id": s.pack_id,
        "condition": s.condition.value,
        "stage": s.stage.value,
        "subtask_status": {sid: st.value for sid, st in s.subtask_status.items()},
        "outcomes": {
            sid: {
                "subtask_id": o.subtask_id,
                "time_spent_seconds": o.time_spent_seconds,
                "attempts": o.attempts,
                "quality": dict(o.quality),
                "artifact_text": o.artifact_text,
            }
            for sid, o in s.outcomes.items()
        },
        "plan": None
        if s.plan is None
        else {
            "ordering": list(s.plan.ordering),
            "time_allocations": dict(s.plan.time_allocations),
            "strategy_note": s.plan.strategy_note,
            "source": s.plan.source,
        },
        "transcripts": {
            channel: [{"role": t.role, "text": t.text} for t in turns]
            for channel, turns in s.transcripts.items()
        },
        "clock": s.clock,
        "event_seq": s.event_seq,
        "assessments": list(s.assessments),
    }


def state_from_doc(doc: dict[str, Any]) -> SessionState:
    plan: Optional[LearningPlan] = None
    if doc.get("plan") is not None:
        plan = LearningPlan(
            ordering=list(doc["plan"]["ordering"]),
            time_allocations={k: int(v) for k, v in doc["plan"]["time_allocations"].items()},
            strategy_note=doc["plan"]["strategy_note"],
            source=doc["plan"]["source"],
        )
    return SessionState(
        session_id=doc["session_id"],
        pack_id=doc["pack_id"],
        condition=Condition(doc["condition"]),
        stage=TaskStage(doc["stage"]),
        subtask_status={sid: SubtaskStatus(v) for sid, v in doc["subtask_status"].items()},
        outcomes={
            sid: SubtaskOutcome(
                subtask_id=o["subtask_id"],
                time_spent_seconds=o["time_spent_seconds"],
                attempts=o["attempts"],
                quality=dict(o["quality"]),
                artifact_text=o["artifact_text"],
            )
            for sid, o in doc["outcomes"].items()
        },
        plan=plan,
        transcripts={
            channel: [ChatTurn(role=t["role"], text=t["text"]) for t in turns]
            for channel, turns in doc["transcripts"].items()
        },
        clock=doc["clock"],
        event_seq=doc["event_seq"],
        assessments=list(doc.get("assessments", [])),
    )
