"""Record ViewModel and response payloads for the web UI test suite.

Drives real sessions against the in-process service and freezes the JSON the
HTTP layer would return. The frontend tests render these fixtures instead of
talking to a live server, so UI assertions stay in lockstep with the actual
view contract. Deterministic: the mock provider is seeded, so reruns produce
byte-identical fixtures.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO_ROOT / "src"))

from srlsession.content import load_pack
from srlsession.gateway import ProviderConfig
from srlsession.harness import load_instruments
from srlsession.service import ServiceConfig, SessionApp

FIXTURES = REPO_ROOT / "fixtures"
# Overridable so the acceptance suite can regenerate into a scratch directory
# and diff against the committed fixtures.
OUT_DIR = Path(os.environ.get("SRL_FIXTURE_OUT", REPO_ROOT / "frontend" / "test" / "fixtures"))

PRIMER_SUMMARY = "The primer explains the loop of observing, deciding, acting, and reading results."

CORRECT_ANSWERS = {
    "q-match": {"observe": "gather state", "plan": "choose action", "act": "apply action"},
    "q-mc": 0,
    "q-order": [
        "Observe the current state",
        "Decide on an action",
        "Invoke the chosen tool",
        "Incorporate the result",
    ],
    "q-tf": True,
}
WRONG_ANSWERS = {**CORRECT_ANSWERS, "q-mc": 2}

REVIEW_TEXT = (
    "The paper argues that tree search over candidate actions beats greedy decoding for "
    "agent planning, and the ablations isolate the value of lookahead depth. I found the "
    "evaluation narrow but the core claim is well supported by the benchmark deltas."
)
MEMO_TEXT = (
    "Office hours clarified that evaluation design matters more than raw model scale. "
    "My takeaway is to benchmark the planner against a no-lookahead baseline before "
    "investing in deeper search, since the professor stressed measurement first."
)
GOAL_TEXT = "Write a report contrasting greedy and lookahead planning for language agents."
REPORT_TEXT = (
    "Language agents alternate between observing state, choosing an action, invoking a tool, "
    "and folding the result back into context. This report contrasts greedy action selection "
    "with shallow lookahead search. Greedy decoding picks the locally best tool call, which "
    "is cheap but short-sighted. Lookahead search expands several candidate actions and "
    "scores their downstream states before committing. Across the readings, lookahead won "
    "whenever tasks required multi-step setup, while greedy matched it on single-call tasks. "
    "My conclusion is to budget search depth by task horizon instead of using one policy."
)


def build_app(tmp: Path) -> SessionApp:
    full = load_pack(FIXTURES / "packs" / "full.json")
    minimal = load_pack(FIXTURES / "packs" / "minimal.json")
    instruments = load_instruments(FIXTURES / "instruments")
    return SessionApp(
        {full.pack_id: full, minimal.pack_id: minimal},
        ServiceConfig(data_dir=tmp, gateway=ProviderConfig(seed=11)),
        instruments=instruments,
    )


def dump(name: str, payload: object) -> None:
    path = OUT_DIR / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def record_full_condition(app: SessionApp) -> None:
    sid = app.open_session("llm-agents-101", "full_srl", session_id="ui-full")
    app.advance(sid)
    dump("full_planning_view.json", app.get_view(sid))
    dump("plan_suggest_response.json", app.plan(sid, {"action": "suggest"}))
    app.plan(sid, {"action": "record", "strategy_note": "Primer first, then apply it."})
    app.advance(sid)

    app.start_subtask(sid, "st-read-primer")
    app.tick(sid, 700, "st-read-primer")  # overruns the 10 minute allocation
    app.submit_subtask(sid, "st-read-primer", {"summary": PRIMER_SUMMARY})
    app.start_subtask(sid, "st-concept-quiz")
    failed = app.submit_subtask(sid, "st-concept-quiz", {"answers": WRONG_ANSWERS})
    dump("submit_failed_response.json", failed)
    hint = app.interact(sid, {
        "interaction": "quiz_help",
        "subtask_id": "st-concept-quiz",
        "question_id": "q-mc",
        "attempt": 2,
    })
    dump("quiz_hint_response.json", hint)
    dump("full_task_view.json", app.get_view(sid))

    # finish every remaining subtask, then advance and reflect
    app.submit_subtask(sid, "st-concept-quiz", {"answers": CORRECT_ANSWERS})
    app.start_subtask(sid, "st-read-paper")
    app.submit_subtask(sid, "st-read-paper", {"summary": REVIEW_TEXT})
    app.start_subtask(sid, "st-review-paper")
    app.submit_subtask(sid, "st-review-paper", {"text": REVIEW_TEXT})
    app.start_subtask(sid, "st-office-hours")
    for question in (
        "How should I evaluate a planning agent?",
        "Is lookahead worth the extra tokens?",
        "What baseline would you insist on?",
    ):
        app.interact(sid, {
            "interaction": "discussion_message",
            "subtask_id": "st-office-hours",
            "text": question,
        })
    app.submit_subtask(sid, "st-office-hours", {})
    app.start_subtask(sid, "st-insight-memo")
    app.submit_subtask(sid, "st-insight-memo", {"text": MEMO_TEXT})
    app.start_subtask(sid, "st-writing-goal")
    app.submit_subtask(sid, "st-writing-goal", {"goal": GOAL_TEXT})
    app.start_subtask(sid, "st-report")
    app.submit_subtask(sid, "st-report", {"text": REPORT_TEXT, "title": "Planning for Agents"})
    app.advance(sid)
    app.interact(sid, {"interaction": "reflection_request", "task_id": "t-foundations"})
    dump("full_review_view.json", app.get_view(sid))


def record_no_srl_condition(app: SessionApp) -> None:
    sid = app.open_session("llm-agents-101", "no_srl", session_id="ui-nosrl")
    app.advance(sid)  # straight to task_process under this condition
    # earlier task groups must finish before the seminar unlocks
    app.start_subtask(sid, "st-read-primer")
    app.submit_subtask(sid, "st-read-primer", {"summary": PRIMER_SUMMARY})
    app.start_subtask(sid, "st-concept-quiz")
    app.submit_subtask(sid, "st-concept-quiz", {"answers": CORRECT_ANSWERS})
    app.start_subtask(sid, "st-read-paper")
    app.submit_subtask(sid, "st-read-paper", {"summary": REVIEW_TEXT})
    app.start_subtask(sid, "st-review-paper")
    app.submit_subtask(sid, "st-review-paper", {"text": REVIEW_TEXT})
    app.start_subtask(sid, "st-office-hours")
    chat = app.interact(sid, {
        "interaction": "discussion_message",
        "subtask_id": "st-office-hours",
        "text": "What should I focus on in the primer?",
    })
    dump("chat_response.json", chat)
    dump("no_srl_task_view.json", app.get_view(sid))


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        app = build_app(Path(tmp))
        dump("launch_packs.json", {"packs": sorted(app.packs)})
        record_full_condition(app)
        record_no_srl_condition(app)


if __name__ == "__main__":
    main()
