"""Agent orchestration: pick the right specialized agent for the state, fill its
prompt template with live context, parse structured replies, and keep replies
inside their word budgets.

The six templates live in the content pack; this module only substitutes the
placeholder spans, so template text survives byte-for-byte around them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .content import (
    AgentKind,
    ContentPack,
    PaperDoc,
    PersonaDef,
    PLACEHOLDER_RE,
    QuestionDef,
    QuestionForm,
    SubtaskDef,
    TaskDef,
    check_answer,
)
from .engine import ChatTurn, Condition, SessionState, TaskStage
from .words import count_words, truncate_words


class OrchestratorError(Exception):
    """Base class for agent-selection and prompt-assembly failures."""


class FeatureDisabled(OrchestratorError):
    """SRL agent pathway requested under the no-SRL condition."""


class PhaseMismatch(OrchestratorError):
    """Interaction kind is not valid at the session's current stage."""


class NoTemplate(OrchestratorError):
    """Content pack carries no template for the agent."""


class MissingPlaceholder(OrchestratorError):
    """A declared placeholder was left unsubstituted."""


class MissingTags(OrchestratorError):
    """Planning reply lacks the <START>/<END> span."""


class NotPermutation(OrchestratorError):
    """Planning reply's numbers are not a permutation of 1..n."""


class CorrectAnswerError(OrchestratorError):
    """Hint requested for an attempt that is actually correct."""


class HintLimitError(OrchestratorError):
    """More than one hint requested for the same failed attempt."""


# Interaction kinds accepted by the service, mapped to agents by select_agent.
PLAN_REQUEST = "plan_request"
QUIZ_HELP = "quiz_help"
PAPER_HELP = "paper_help"
DISCUSSION_MESSAGE = "discussion_message"
WRITING_HELP = "writing_help"
REFLECTION_REQUEST = "reflection_request"

INTERACTION_KINDS = (
    PLAN_REQUEST,
    QUIZ_HELP,
    PAPER_HELP,
    DISCUSSION_MESSAGE,
    WRITING_HELP,
    REFLECTION_REQUEST,
)

_AGENT_OF_INTERACTION = {
    PLAN_REQUEST: (TaskStage.PLANNING, AgentKind.PLANNING),
    QUIZ_HELP: (TaskStage.TASK_PROCESS, AgentKind.QUIZ_TUTOR),
    PAPER_HELP: (TaskStage.TASK_PROCESS, AgentKind.PAPER_REVIEW),
    DISCUSSION_MESSAGE: (TaskStage.TASK_PROCESS, AgentKind.CHATTING),
    WRITING_HELP: (TaskStage.TASK_PROCESS, AgentKind.WRITING),
    REFLECTION_REQUEST: (TaskStage.REVIEW, AgentKind.REFLECTION),
}

CHAT_HISTORY_CAP = 20


def select_agent(s: SessionState, interaction: str) -> AgentKind:
    """Map (stage, interaction kind) to the owning agent, enforcing the condition."""
    if interaction not in _AGENT_OF_INTERACTION:
        raise ValueError(f"unknown interaction kind {interaction!r}")
    if s.condition is Condition.NO_SRL and interaction != DISCUSSION_MESSAGE:
        raise FeatureDisabled(f"{interaction} is not part of this session condition")
    required_stage, agent = _AGENT_OF_INTERACTION[interaction]
    if s.stage is not required_stage:
        raise PhaseMismatch(
            f"{interaction} belongs to the {required_stage.value} stage, not {s.stage.value}"
        )
    return agent


def render_chat_history(turns: Sequence[ChatTurn], cap: int = CHAT_HISTORY_CAP) -> str:
    """Alternating User:/Assistant: lines, oldest first, capped at the most recent turns."""
    recent = list(turns)[-cap:]
    labels = {"user": "User", "assistant": "Assistant"}
    return "\n".join(f"{labels[t.role]}: {t.text}" for t in recent)


@dataclass
class PromptBundle:
    agent: AgentKind
    system_text: str
    user_text: str
    reply_word_limit: Optional[int] = None


@dataclass
class AgentReply:
    raw_text: str
    budgeted_text: str
    structured: Optional[Any] = None
    word_count: int = 0


@dataclass
class AgentContext:
    """Everything observable in session state that a template may need.

    Only the fields for the agent being assembled have to be present.
    """

    chat_history: list[ChatTurn] = field(default_factory=list)
    # planning
    subtasks: Optional[list[SubtaskDef]] = None
    # reflection
    task: Optional[TaskDef] = None
    outcome_lines: Optional[list[str]] = None
    # quiz tutor
    question: Optional[QuestionDef] = None
    attempt: Any = None
    # chatting
    persona: Optional[PersonaDef] = None
    user_question: Optional[str] = None
    # paper review
    review_question: Optional[str] = None
    review_summary: Optional[str] = None
    paper: Optional[PaperDoc] = None
    # writing
    writing_title: Optional[str] = None
    writing_body: Optional[str] = None
    writing_question: Optional[str] = None
    previous_outcomes: Optional[list[str]] = None


def _subtask_item_body(sub: SubtaskDef) -> str:
    return (
        f"{sub.title}\n"
        f"   * Description: {sub.description}\n"
        f"   * Estimated time: {sub.estimated_minutes} minutes"
    )


def _planning_substitutions(ctx: AgentContext) -> dict[str, str]:
    subtasks = ctx.subtasks or []
    if not subtasks:
        raise MissingPlaceholder("planning context requires at least one subtask")
    first = subtasks[0]
    if len(subtasks) == 1:
        additional = "(no additional subtasks)"
    else:
        parts = [_subtask_item_body(subtasks[1])]
        for i, sub in enumerate(subtasks[2:], start=3):
            parts.append(f"\n\n{i}. {_subtask_item_body(sub)}")
        additional = "".join(parts)
    return {
        "Subtask title": first.title,
        "Subtask description": first.description,
        "Time estimate": f"{first.estimated_minutes} minutes",
        "Additional subtasks...": additional,
    }


QUESTION_TYPE_LABELS = {
    QuestionForm.MATCHING: "matching question",
    QuestionForm.MULTIPLE_CHOICE: "multiple choice",
    QuestionForm.ORDERING: "ordering/sequencing",
    QuestionForm.TRUE_FALSE: "true/false",
}


def _concept_label(question: QuestionDef) -> str:
    return question.concept_tags[0] if question.concept_tags else question.stem


def _quiz_details(question: QuestionDef, attempt: Any) -> str:
    """The form-specific hint-request sentence for an incorrect attempt."""
    if question.form is QuestionForm.MATCHING:
        pairs = question.pairs or {}
        made = attempt if isinstance(attempt, dict) else {}
        wrong = {k: v for k, v in made.items() if pairs.get(k) != v}
        listed = ", ".join(f"{k} -> {v}" for k, v in sorted(wrong.items()))
        connections = f"incorrect connections ({listed})" if listed else "incorrect connections"
        return (
            f"Based on the concept category {_concept_label(question)} and the "
            f"{connections} I've made, please provide a targeted hint."
        )
    if question.form is QuestionForm.MULTIPLE_CHOICE:
        correct = (question.options or [])[question.correct_index or 0]
        return f'Explain why "{correct}" is the correct definition of {_concept_label(question)}'
    if question.form is QuestionForm.ORDERING:
        items = question.items or []
        placed = attempt if isinstance(attempt, list) else []
        current = items[-1] if items else ""
        for i, expected in enumerate(items):
            if i >= len(placed):
                current = expected  # nothing placed at the first missing position
                break
            if placed[i] != expected:
                current = placed[i]
                break
        return (
            f"Hint: {current} should be placed at a different position in the "
            f"{_concept_label(question)} timeline."
        )
    judgment = "true" if question.truth else "false"
    return f"Briefly explain why the statement {question.statement} is {judgment}"


def _combined_input(ctx: AgentContext) -> str:
    parts = []
    if ctx.review_question:
        parts.append(f"Question: {ctx.review_question}")
    if ctx.review_summary:
        parts.append(f"Summary: {ctx.review_summary}")
    if ctx.paper is not None:
        parts.append(f"Paper Content:\n{ctx.paper.body}")
    return "\n".join(parts)


def _substitutions(agent: AgentKind, ctx: AgentContext) -> dict[str, str]:
    subs: dict[str, str] = {"chatHistory": render_chat_history(ctx.chat_history)}
    if agent is AgentKind.PLANNING:
        subs.update(_planning_substitutions(ctx))
    elif agent is AgentKind.REFLECTION:
        if ctx.task is None:
            raise MissingPlaceholder("reflection context requires the task")
        subs["Task title"] = ctx.task.title
        subs["Task description"] = ctx.task.description
        subs["Subtask outcomes will be listed here"] = "\n".join(ctx.outcome_lines or [])
    elif agent is AgentKind.QUIZ_TUTOR:
        if ctx.question is None:
            raise MissingPlaceholder("quiz context requires the question")
        subs["question type"] = QUESTION_TYPE_LABELS[ctx.question.form]
        subs["question details"] = _quiz_details(ctx.question, ctx.attempt)
    elif agent is AgentKind.CHATTING:
        persona = ctx.persona
        if persona is None:
            raise MissingPlaceholder("chat context requires the persona")
        directions = persona.research_directions or [""]
        subs.update(
            {
                "professor name": persona.professor_name,
                "department": persona.department,
                "university": persona.university,
                "research field": persona.research_field,
                "specific area": persona.research_field,
                "research direction 1": directions[0],
                "research direction 2": directions[1] if len(directions) > 1 else directions[0],
                "user question": ctx.user_question or "",
            }
        )
    elif agent is AgentKind.PAPER_REVIEW:
        subs["combinedInput"] = _combined_input(ctx)
    else:
        reference = ""
        if ctx.previous_outcomes:
            reference = "Previous Task Outcomes:\n" + "\n".join(ctx.previous_outcomes)
        subs.update(
            {
                "referenceContent": reference,
                "title": ctx.writing_title or "",
                "body": ctx.writing_body or "",
                "question": ctx.writing_question or "",
            }
        )
    return subs


def assemble_prompt(agent: AgentKind, ctx: AgentContext, pack: ContentPack) -> PromptBundle:
    """Substitute the agent's template; text outside the spans is untouched."""
    template = pack.prompt_templates.get(agent)
    if template is None:
        raise NoTemplate(f"pack has no template for agent {agent.value}")
    subs = _substitutions(agent, ctx)
    system_text = template.system_template
    user_text = template.user_template
    for name, value in subs.items():
        token = "{" + name + "}"
        system_text = system_text.replace(token, value)
        user_text = user_text.replace(token, value)
    for text in (system_text, user_text):
        leftover = [m for m in PLACEHOLDER_RE.findall(text) if m in template.placeholders]
        if leftover:
            raise MissingPlaceholder(f"unsubstituted placeholders: {sorted(set(leftover))}")
    return PromptBundle(
        agent=agent,
        system_text=system_text,
        user_text=user_text,
        reply_word_limit=template.reply_word_limit,
    )


def quiz_hint_request(
    question: QuestionDef,
    attempt: Any,
    pack: ContentPack,
    chat_history: Sequence[ChatTurn] = (),
) -> PromptBundle:
    """Hint prompt for a wrong attempt; correct attempts get no hint."""
    if check_answer(question, attempt):
        raise CorrectAnswerError("attempt is correct; no hint to give")
    ctx = AgentContext(chat_history=list(chat_history), question=question, attempt=attempt)
    return assemble_prompt(AgentKind.QUIZ_TUTOR, ctx, pack)


def parse_planning_reply(text: str, n_subtasks: int) -> list[int]:
    """Extract the tagged permutation from a planning reply."""
    if n_subtasks < 1:
        raise ValueError("n_subtasks must be at least 1")
    start = text.find("<START>")
    if start == -1:
        raise MissingTags("reply has no <START> tag")
    end = text.find("<END>", start + len("<START>"))
    if end == -1:
        raise MissingTags("reply has no <END> tag after <START>")
    inner = text[start + len("<START>") : end].strip()
    tokens = [t.strip() for t in inner.replace("\n", " ").split(",")]
    if not tokens or any(not t.isdigit() for t in tokens):
        raise NotPermutation(f"span {inner!r} is not a comma-separated number list")
    values = [int(t) for t in tokens]
    if sorted(values) != list(range(1, n_subtasks + 1)):
        raise NotPermutation(f"{values} is not a permutation of 1..{n_subtasks}")
    return values


def enforce_reply_budget(
    agent: AgentKind,
    raw: str,
    limit: int,
    reask: Optional[Callable[[str], Optional[str]]] = None,
) -> str:
    """Guarantee the agent's word budget: one re-ask, then a hard truncation."""
    if limit <= 0:
        raise ValueError("limit must be positive")
    if count_words(raw) <= limit:
        return raw
    latest = raw
    if reask is not None:
        try:
            again = reask(raw)
        except Exception:
            again = None
        if again:
            if count_words(again) <= limit:
                return again
            latest = again
    return truncate_words(latest, limit)


def reflection_outcome_lines(s: SessionState, task: TaskDef) -> list[str]:
    """Stable per-subtask summary lines for the reflection prompt."""
    lines = []
    for sub in task.subtasks:
        outcome = s.outcomes.get(sub.subtask_id)
        status = s.subtask_status[sub.subtask_id].value
        if outcome is None:
            lines.append(f"* {sub.title}: {status}")
            continue
        quality = ", ".join(f"{k}={_format_number(v)}" for k, v in sorted(outcome.quality.items()))
        detail = f"* {sub.title}: {status}, {outcome.attempts} attempts, {outcome.time_spent_seconds}s"
        lines.append(f"{detail}, {quality}" if quality else detail)
    return lines


def previous_outcome_lines(s: SessionState, pack: ContentPack) -> list[str]:
    """Completed artifact texts, oldest declaration first, for the writing agent."""
    lines = []
    for sub in pack.all_subtasks():
        outcome = s.outcomes.get(sub.subtask_id)
        if outcome and outcome.artifact_text:
            lines.append(f"{sub.title}: {outcome.artifact_text}")
    return lines


def _format_number(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else f"{value:g}"
