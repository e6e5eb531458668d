"""Content packs: the externally authored JSON bundles that define a learning experience.

A pack carries the four canonical stages, tasks with paired subtasks, a question
bank, reading documents, professor personas, per-agent prompt templates, and the
enhancement settings. Packs are parsed strictly (unknown fields rejected),
validated as a whole, and immutable once loaded.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Union

CANONICAL_STAGES = ("introduction", "planning", "task_process", "review")


class ContentError(Exception):
    """Base class for pack loading and validation failures."""


class ParseError(ContentError):
    """Document is not well-formed JSON."""


class SchemaError(ContentError):
    """Document violates the pack schema (missing/extra/ill-typed fields or invariants)."""


class DanglingRefError(ContentError):
    """A content_ref or dependency does not resolve to an existing record."""


class CycleError(ContentError):
    """Dependency graph contains a cycle."""


class SubtaskKind(str, enum.Enum):
    KNOWLEDGE = "knowledge"
    QUIZ = "quiz"
    PAPER = "paper"
    REVIEW = "review"
    DISCUSSION = "discussion"
    INSIGHT = "insight"
    WRITING_GOAL = "writing_goal"
    REPORT = "report"


# Input activity required among the dependencies of its paired assessment activity.
PAIRED_KINDS = {
    SubtaskKind.QUIZ: SubtaskKind.KNOWLEDGE,
    SubtaskKind.REVIEW: SubtaskKind.PAPER,
    SubtaskKind.INSIGHT: SubtaskKind.DISCUSSION,
    SubtaskKind.REPORT: SubtaskKind.WRITING_GOAL,
}


class CompletionRule(str, enum.Enum):
    ALL_QUESTIONS_CORRECT = "all_questions_correct"
    MIN_QUESTIONS_CORRECT = "min_questions_correct"
    MIN_WORDS = "min_words"
    SUMMARY_SUBMITTED = "summary_submitted"
    MIN_CHAT_TURNS = "min_chat_turns"
    GOAL_RECORDED = "goal_recorded"


RULES_WITH_N = {
    CompletionRule.MIN_QUESTIONS_CORRECT,
    CompletionRule.MIN_WORDS,
    CompletionRule.MIN_CHAT_TURNS,
}

# Which completion rules make sense for which subtask kind.
RULE_KINDS = {
    CompletionRule.ALL_QUESTIONS_CORRECT: {SubtaskKind.QUIZ},
    CompletionRule.MIN_QUESTIONS_CORRECT: {SubtaskKind.QUIZ},
    CompletionRule.MIN_WORDS: {SubtaskKind.REVIEW, SubtaskKind.INSIGHT, SubtaskKind.REPORT},
    CompletionRule.SUMMARY_SUBMITTED: {
        SubtaskKind.KNOWLEDGE,
        SubtaskKind.PAPER,
        SubtaskKind.REVIEW,
        SubtaskKind.INSIGHT,
    },
    CompletionRule.MIN_CHAT_TURNS: {SubtaskKind.DISCUSSION},
    CompletionRule.GOAL_RECORDED: {SubtaskKind.WRITING_GOAL},
}


class QuestionForm(str, enum.Enum):
    MATCHING = "matching"
    MULTIPLE_CHOICE = "multiple_choice"
    ORDERING = "ordering"
    TRUE_FALSE = "true_false"


class AgentKind(str, enum.Enum):
    PLANNING = "planning"
    QUIZ_TUTOR = "quiz_tutor"
    PAPER_REVIEW = "paper_review"
    CHATTING = "chatting"
    WRITING = "writing"
    REFLECTION = "reflection"


# Reply budgets fixed by the agent templates; None means no enforced limit.
AGENT_WORD_BUDGETS: dict[AgentKind, Optional[int]] = {
    AgentKind.PLANNING: None,
    AgentKind.QUIZ_TUTOR: 20,
    AgentKind.PAPER_REVIEW: 30,
    AgentKind.CHATTING: None,
    AgentKind.WRITING: 50,
    AgentKind.REFLECTION: 30,
}


@dataclass
class CompletionCriteria:
    rule: CompletionRule
    n: Optional[int] = None


@dataclass
class SubtaskDef:
    subtask_id: str
    kind: SubtaskKind
    title: str
    description: str
    estimated_minutes: int
    content_ref: str
    completion: CompletionCriteria
    depends_on: list[str] = field(default_factory=list)


@dataclass
class TaskDef:
    task_id: str
    title: str
    description: str
    subtasks: list[SubtaskDef] = field(default_factory=list)
    depends_on: list[str] = field(default_factory=list)


@dataclass
class QuestionDef:
    question_id: str
    form: QuestionForm
    stem: str
    concept_tags: list[str] = field(default_factory=list)
    # form-specific payloads; exactly the fields for `form` are set
    pairs: Optional[dict[str, str]] = None
    options: Optional[list[str]] = None
    correct_index: Optional[int] = None
    items: Optional[list[str]] = None
    statement: Optional[str] = None
    truth: Optional[bool] = None


@dataclass
class PaperDoc:
    paper_id: str
    title: str
    abstract: str
    body: str


@dataclass
class PersonaDef:
    persona_id: str
    professor_name: str
    department: str
    university: str
    research_field: str
    research_directions: list[str] = field(default_factory=list)


@dataclass
class PromptTemplateDef:
    system_template: str
    user_template: str
    placeholders: list[str] = field(default_factory=list)
    reply_word_limit: Optional[int] = None


@dataclass
class EnhancementConfig:
    srl_enabled: bool = True
    monitor_sampling_seconds: int = 30
    quiz_hint_policy: str = "on_wrong_attempt"


@dataclass
class ContentPack:
    pack_id: str
    stages: list[str]
    tasks: list[TaskDef]
    question_bank: list[QuestionDef]
    papers: list[PaperDoc]
    personas: list[PersonaDef]
    prompt_templates: dict[AgentKind, PromptTemplateDef]
    enhancement: EnhancementConfig

    # lookup indexes, rebuilt on construction and excluded from equality
    _subtask_index: dict[str, SubtaskDef] = field(init=False, repr=False, compare=False, default_factory=dict)
    _task_index: dict[str, TaskDef] = field(init=False, repr=False, compare=False, default_factory=dict)
    _task_of: dict[str, str] = field(init=False, repr=False, compare=False, default_factory=dict)
    _question_index: dict[str, QuestionDef] = field(init=False, repr=False, compare=False, default_factory=dict)
    _paper_index: dict[str, PaperDoc] = field(init=False, repr=False, compare=False, default_factory=dict)
    _persona_index: dict[str, PersonaDef] = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        for task in self.tasks:
            self._task_index[task.task_id] = task
            for sub in task.subtasks:
                self._subtask_index[sub.subtask_id] = sub
                self._task_of[sub.subtask_id] = task.task_id
        self._question_index = {q.question_id: q for q in self.question_bank}
        self._paper_index = {p.paper_id: p for p in self.papers}
        self._persona_index = {p.persona_id: p for p in self.personas}

    def subtask(self, subtask_id: str) -> SubtaskDef:
        return self._subtask_index[subtask_id]

    def has_subtask(self, subtask_id: str) -> bool:
        return subtask_id in self._subtask_index

    def task(self, task_id: str) -> TaskDef:
        return self._task_index[task_id]

    def task_of(self, subtask_id: str) -> TaskDef:
        return self._task_index[self._task_of[subtask_id]]

    def question(self, question_id: str) -> QuestionDef:
        return self._question_index[question_id]

    def paper(self, paper_id: str) -> PaperDoc:
        return self._paper_index[paper_id]

    def persona(self, persona_id: str) -> PersonaDef:
        return self._persona_index[persona_id]

    def all_subtasks(self) -> list[SubtaskDef]:
        return [sub for task in self.tasks for sub in task.subtasks]

    def questions_for_tag(self, tag: str) -> list[QuestionDef]:
        return [q for q in self.question_bank if tag in q.concept_tags]

    def quiz_questions(self, subtask_id: str) -> list[QuestionDef]:
        """Questions selected by a quiz subtask's concept-tag content_ref."""
        sub = self.subtask(subtask_id)
        if sub.kind is not SubtaskKind.QUIZ:
            raise ValueError(f"{subtask_id} is not a quiz subtask")
        return self.questions_for_tag(sub.content_ref)


@dataclass
class Finding:
    path: str
    category: str
    message: str

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        return f"{self.path}: [{self.category}] {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, path: str, category: str, message: str) -> None:
        self.findings.append(Finding(path, category, message))


# ---------------------------------------------------------------------------
# strict document parsing


def _require_keys(obj: Mapping[str, Any], required: Iterable[str], optional: Iterable[str], path: str) -> None:
    required = set(required)
    allowed = required | set(optional)
    missing = required - obj.keys()
    extra = obj.keys() - allowed
    if missing:
        raise SchemaError(f"{path}: missing fields {sorted(missing)}")
    if extra:
        raise SchemaError(f"{path}: unknown fields {sorted(extra)}")


def _string(obj: Mapping[str, Any], key: str, path: str, allow_empty: bool = False) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise SchemaError(f"{path}.{key}: expected string, got {type(value).__name__}")
    if not allow_empty and not value:
        raise SchemaError(f"{path}.{key}: must be non-empty")
    return value


def _string_list(obj: Mapping[str, Any], key: str, path: str) -> list[str]:
    value = obj[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaError(f"{path}.{key}: expected list of strings")
    return list(value)


def _int(obj: Mapping[str, Any], key: str, path: str) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{path}.{key}: expected integer")
    return value


def _parse_completion(obj: Any, path: str) -> CompletionCriteria:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected object")
    _require_keys(obj, ["rule"], ["n"], path)
    try:
        rule = CompletionRule(obj["rule"])
    except ValueError:
        raise SchemaError(f"{path}.rule: unknown rule {obj['rule']!r}") from None
    n = None
    if rule in RULES_WITH_N:
        if "n" not in obj:
            raise SchemaError(f"{path}: rule {rule.value} requires parameter n")
        n = _int(obj, "n", path)
    elif "n" in obj:
        raise SchemaError(f"{path}: rule {rule.value} takes no parameter n")
    return CompletionCriteria(rule=rule, n=n)


def _parse_subtask(obj: Any, path: str) -> SubtaskDef:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected object")
    _require_keys(
        obj,
        ["id", "kind", "title", "description", "estimated_minutes", "content_ref", "completion"],
        ["depends_on"],
        path,
    )
    try:
        kind = SubtaskKind(obj["kind"])
    except ValueError:
        raise SchemaError(f"{path}.kind: unknown kind {obj['kind']!r}") from None
    return SubtaskDef(
        subtask_id=_string(obj, "id", path),
        kind=kind,
        title=_string(obj, "title", path),
        description=_string(obj, "description", path),
        estimated_minutes=_int(obj, "estimated_minutes", path),
        content_ref=_string(obj, "content_ref", path),
        completion=_parse_completion(obj["completion"], f"{path}.completion"),
        depends_on=_string_list(obj, "depends_on", path) if "depends_on" in obj else [],
    )


def _parse_task(obj: Any, path: str) -> TaskDef:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected object")
    _require_keys(obj, ["id", "title", "description", "subtasks"], ["depends_on"], path)
    subtasks_raw = obj["subtasks"]
    if not isinstance(subtasks_raw, list):
        raise SchemaError(f"{path}.subtasks: expected array")
    return TaskDef(
        task_id=_string(obj, "id", path),
        title=_string(obj, "title", path),
        description=_string(obj, "description", path),
        subtasks=[_parse_subtask(s, f"{path}.subtasks[{i}]") for i, s in enumerate(subtasks_raw)],
        depends_on=_string_list(obj, "depends_on", path) if "depends_on" in obj else [],
    )


_FORM_FIELDS = {
    QuestionForm.MATCHING: ("pairs",),
    QuestionForm.MULTIPLE_CHOICE: ("options", "correct_index"),
    QuestionForm.ORDERING: ("items",),
    QuestionForm.TRUE_FALSE: ("statement", "truth"),
}


def _parse_question(obj: Any, path: str) -> QuestionDef:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected object")
    if "form" not in obj or not isinstance(obj.get("form"), str):
        raise SchemaError(f"{path}.form: expected string")
    try:
        form = QuestionForm(obj["form"])
    except ValueError:
        raise SchemaError(f"{path}.form: unknown form {obj['form']!r}") from None
    _require_keys(obj, ["id", "form", "stem", "tags", *_FORM_FIELDS[form]], [], path)
    question = QuestionDef(
        question_id=_string(obj, "id", path),
        form=form,
        stem=_string(obj, "stem", path),
        concept_tags=_string_list(obj, "tags", path),
    )
    if form is QuestionForm.MATCHING:
        pairs = obj["pairs"]
        if not isinstance(pairs, Mapping) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in pairs.items()
        ):
            raise SchemaError(f"{path}.pairs: expected object of string -> string")
        question.pairs = dict(pairs)
    elif form is QuestionForm.MULTIPLE_CHOICE:
        question.options = _string_list(obj, "options", path)
        question.correct_index = _int(obj, "correct_index", path)
    elif form is QuestionForm.ORDERING:
        question.items = _string_list(obj, "items", path)
    else:
        question.statement = _string(obj, "statement", path)
        if not isinstance(obj["truth"], bool):
            raise SchemaError(f"{path}.truth: expected boolean")
        question.truth = obj["truth"]
    return question


def _parse_paper(obj: Any, path: str) -> PaperDoc:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected object")
    _require_keys(obj, ["id", "title", "body"], ["abstract"], path)
    return PaperDoc(
        paper_id=_string(obj, "id", path),
        title=_string(obj, "title", path),
        abstract=_string(obj, "abstract", path, allow_empty=True) if "abstract" in obj else "",
        body=_string(obj, "body", path),
    )


def _parse_persona(obj: Any, path: str) -> PersonaDef:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected object")
    _require_keys(
        obj,
        ["id", "professor_name", "department", "university", "research_field", "research_directions"],
        [],
        path,
    )
    return PersonaDef(
        persona_id=_string(obj, "id", path),
        professor_name=_string(obj, "professor_name", path, allow_empty=True),
        department=_string(obj, "department", path, allow_empty=True),
        university=_string(obj, "university", path, allow_empty=True),
        research_field=_string(obj, "research_field", path, allow_empty=True),
        research_directions=_string_list(obj, "research_directions", path),
    )


def _parse_prompt(obj: Any, path: str) -> PromptTemplateDef:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected object")
    _require_keys(obj, ["system", "user", "placeholders"], ["reply_word_limit"], path)
    limit = None
    if "reply_word_limit" in obj and obj["reply_word_limit"] is not None:
        limit = _int(obj, "reply_word_limit", path)
    return PromptTemplateDef(
        system_template=_string(obj, "system", path),
        user_template=_string(obj, "user", path, allow_empty=True),
        placeholders=_string_list(obj, "placeholders", path),
        reply_word_limit=limit,
    )


def _parse_enhancement(obj: Any, path: str) -> EnhancementConfig:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected object")
    _require_keys(obj, ["srl_enabled", "monitor_sampling_seconds", "quiz_hint_policy"], [], path)
    if not isinstance(obj["srl_enabled"], bool):
        raise SchemaError(f"{path}.srl_enabled: expected boolean")
    return EnhancementConfig(
        srl_enabled=obj["srl_enabled"],
        monitor_sampling_seconds=_int(obj, "monitor_sampling_seconds", path),
        quiz_hint_policy=_string(obj, "quiz_hint_policy", path),
    )


def parse_pack_document(doc: Any) -> ContentPack:
    """Parse a decoded JSON document into a ContentPack, rejecting unknown fields.

    Structural errors raise SchemaError. Semantic invariants (uniqueness,
    pairing, cycles, reference resolution) are the job of validate_pack.
    """
    if not isinstance(doc, Mapping):
        raise SchemaError("top-level: expected object")
    _require_keys(
        doc,
        ["pack_id", "stages", "tasks", "questions", "papers", "personas", "prompts", "enhancement"],
        [],
        "top-level",
    )
    stages = doc["stages"]
    if not isinstance(stages, list) or not all(isinstance(s, str) for s in stages):
        raise SchemaError("stages: expected array of strings")
    for key in ("tasks", "questions", "papers", "personas"):
        if not isinstance(doc[key], list):
            raise SchemaError(f"{key}: expected array")
    prompts_raw = doc["prompts"]
    if not isinstance(prompts_raw, Mapping):
        raise SchemaError("prompts: expected object")
    prompt_templates: dict[AgentKind, PromptTemplateDef] = {}
    for key, value in prompts_raw.items():
        try:
            agent = AgentKind(key)
        except ValueError:
            raise SchemaError(f"prompts.{key}: unknown agent kind") from None
        prompt_templates[agent] = _parse_prompt(value, f"prompts.{key}")
    return ContentPack(
        pack_id=_string(doc, "pack_id", "top-level"),
        stages=list(stages),
        tasks=[_parse_task(t, f"tasks[{i}]") for i, t in enumerate(doc["tasks"])],
        question_bank=[_parse_question(q, f"questions[{i}]") for i, q in enumerate(doc["questions"])],
        papers=[_parse_paper(p, f"papers[{i}]") for i, p in enumerate(doc["papers"])],
        personas=[_parse_persona(p, f"personas[{i}]") for i, p in enumerate(doc["personas"])],
        prompt_templates=prompt_templates,
        enhancement=_parse_enhancement(doc["enhancement"], "enhancement"),
    )


# ---------------------------------------------------------------------------
# semantic validation


# Placeholder tokens as they appear in the agent templates: {chatHistory},
# {professor name}, {Additional subtasks...}, {true/false judgment}, etc.
PLACEHOLDER_RE = re.compile(r"\{([A-Za-z][A-Za-z0-9_ ./]*)\}")


def _check_unique(ids: list[str], namespace: str, report: ValidationReport) -> None:
    seen: set[str] = set()
    for identifier in ids:
        if identifier in seen:
            report.add(namespace, "duplicate_id", f"duplicate identifier {identifier!r}")
        seen.add(identifier)


def _find_cycle(nodes: list[str], edges: Mapping[str, list[str]]) -> Optional[list[str]]:
    """Return one cycle as a node list, or None. Edges map node -> prerequisites."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    stack: list[str] = []

    def visit(node: str) -> Optional[list[str]]:
        color[node] = GRAY
        stack.append(node)
        for dep in edges.get(node, []):
            if dep not in color:
                continue
            if color[dep] == GRAY:
                return stack[stack.index(dep):]
            if color[dep] == WHITE:
                cycle = visit(dep)
                if cycle:
                    return cycle
        stack.pop()
        color[node] = BLACK
        return None

    for node in nodes:
        if color[node] == WHITE:
            cycle = visit(node)
            if cycle:
                return cycle
    return None


def _validate_question(q: QuestionDef, path: str, report: ValidationReport) -> None:
    if q.form is QuestionForm.MATCHING:
        if not q.pairs:
            report.add(path, "question_structure", "matching question needs at least one pair")
    elif q.form is QuestionForm.MULTIPLE_CHOICE:
        options = q.options or []
        if len(options) < 2:
            report.add(path, "question_structure", "multiple_choice needs at least 2 options")
        if q.correct_index is None or not (0 <= q.correct_index < len(options)):
            report.add(path, "question_structure", "multiple_choice needs exactly one in-range correct option")
    elif q.form is QuestionForm.ORDERING:
        if len(q.items or []) < 2:
            report.add(path, "question_structure", "ordering needs at least 2 items")
    elif q.truth is None or not q.statement:
        report.add(path, "question_structure", "true_false needs a statement and a truth value")


def _validate_content_ref(pack: ContentPack, sub: SubtaskDef, path: str, report: ValidationReport) -> None:
    ref = sub.content_ref
    if sub.kind in (SubtaskKind.KNOWLEDGE, SubtaskKind.PAPER, SubtaskKind.REVIEW, SubtaskKind.WRITING_GOAL):
        if ref not in pack._paper_index:
            report.add(path, "dangling_ref", f"content_ref {ref!r} does not name a document")
    elif sub.kind is SubtaskKind.QUIZ:
        if not pack.questions_for_tag(ref):
            report.add(path, "dangling_ref", f"content_ref {ref!r} matches no question concept tag")
    elif sub.kind in (SubtaskKind.DISCUSSION, SubtaskKind.INSIGHT):
        if ref not in pack._persona_index:
            report.add(path, "dangling_ref", f"content_ref {ref!r} does not name a persona")
    else:  # REPORT points at the goal record its writing-goal subtask produces
        target = pack._subtask_index.get(ref)
        if target is None or target.kind is not SubtaskKind.WRITING_GOAL:
            report.add(path, "dangling_ref", f"content_ref {ref!r} does not name a writing_goal subtask")


def validate_pack(pack: ContentPack) -> ValidationReport:
    """Check every pack invariant; findings are data, not exceptions."""
    report = ValidationReport()

    if pack.stages != list(CANONICAL_STAGES):
        report.add("stages", "stage_list", f"stages must be exactly {list(CANONICAL_STAGES)}")

    _check_unique([t.task_id for t in pack.tasks], "tasks", report)
    _check_unique([s.subtask_id for t in pack.tasks for s in t.subtasks], "subtasks", report)
    _check_unique([q.question_id for q in pack.question_bank], "questions", report)
    _check_unique([p.paper_id for p in pack.papers], "papers", report)
    _check_unique([p.persona_id for p in pack.personas], "personas", report)

    if not pack.tasks:
        report.add("tasks", "empty", "pack must define at least one task")

    task_ids = {t.task_id for t in pack.tasks}
    for t_idx, task in enumerate(pack.tasks):
        t_path = f"tasks[{t_idx}]"
        if not task.subtasks:
            report.add(t_path, "empty", f"task {task.task_id!r} must have at least one subtask")
        for dep in task.depends_on:
            if dep not in task_ids:
                report.add(t_path, "dangling_ref", f"depends_on {dep!r} is not a task")
        local_ids = {s.subtask_id for s in task.subtasks}
        for s_idx, sub in enumerate(task.subtasks):
            s_path = f"{t_path}.subtasks[{s_idx}]"
            if sub.estimated_minutes <= 0:
                report.add(s_path, "bad_value", "estimated_minutes must be positive")
            if sub.completion.n is not None and sub.completion.n <= 0:
                report.add(s_path, "bad_value", "completion parameter n must be positive")
            if sub.kind not in RULE_KINDS[sub.completion.rule]:
                report.add(
                    s_path,
                    "rule_mismatch",
                    f"rule {sub.completion.rule.value} is not valid for kind {sub.kind.value}",
                )
            for dep in sub.depends_on:
                if dep not in local_ids:
                    report.add(s_path, "dangling_ref", f"depends_on {dep!r} is not a subtask of the same task")
            required = PAIRED_KINDS.get(sub.kind)
            if required is not None:
                dep_kinds = {
                    pack._subtask_index[d].kind for d in sub.depends_on if d in pack._subtask_index
                }
                if required not in dep_kinds:
                    report.add(
                        s_path,
                        "pairing",
                        f"{sub.kind.value} subtask must depend on a {required.value} subtask",
                    )
            _validate_content_ref(pack, sub, s_path, report)

        cycle = _find_cycle(
            [s.subtask_id for s in task.subtasks],
            {s.subtask_id: s.depends_on for s in task.subtasks},
        )
        if cycle:
            report.add(t_path, "cycle", f"dependency cycle at subtasks {','.join(cycle)}")

    cycle = _find_cycle([t.task_id for t in pack.tasks], {t.task_id: t.depends_on for t in pack.tasks})
    if cycle:
        report.add("tasks", "cycle", f"dependency cycle at tasks {','.join(cycle)}")

    for q_idx, question in enumerate(pack.question_bank):
        _validate_question(question, f"questions[{q_idx}]", report)

    for p_idx, persona in enumerate(pack.personas):
        p_path = f"personas[{p_idx}]"
        values = [persona.professor_name, persona.department, persona.university, persona.research_field]
        if not all(values) or not persona.research_directions or not all(persona.research_directions):
            report.add(p_path, "bad_value", "persona fields must all be non-empty")

    for agent in AgentKind:
        if agent not in pack.prompt_templates:
            report.add("prompts", "missing_template", f"no template for agent {agent.value}")
            continue
        template = pack.prompt_templates[agent]
        p_path = f"prompts.{agent.value}"
        declared = set(template.placeholders)
        used = set(PLACEHOLDER_RE.findall(template.system_template)) | set(
            PLACEHOLDER_RE.findall(template.user_template)
        )
        undeclared = used - declared
        if undeclared:
            report.add(p_path, "undeclared_placeholder", f"placeholders {sorted(undeclared)} not declared")
        if template.reply_word_limit is not None and template.reply_word_limit <= 0:
            report.add(p_path, "bad_value", "reply_word_limit must be positive")
        expected = AGENT_WORD_BUDGETS[agent]
        if template.reply_word_limit != expected:
            want = "absent" if expected is None else str(expected)
            report.add(p_path, "budget_mismatch", f"reply_word_limit must be {want} for {agent.value}")

    if pack.enhancement.monitor_sampling_seconds <= 0:
        report.add("enhancement", "bad_value", "monitor_sampling_seconds must be positive")
    if pack.enhancement.quiz_hint_policy not in ("on_wrong_attempt", "never"):
        report.add("enhancement", "bad_value", "quiz_hint_policy must be on_wrong_attempt or never")

    return report


def load_pack(path: Union[str, Path]) -> ContentPack:
    """Load, parse, and validate a pack file. Any violation aborts the load."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    pack = parse_pack_document(doc)
    report = validate_pack(pack)
    if not report.ok:
        summary = "; ".join(str(f) for f in report.findings[:10])
        if any(f.category == "dangling_ref" for f in report.findings):
            raise DanglingRefError(f"{path}: {summary}")
        raise SchemaError(f"{path}: {summary}")
    return pack


# ---------------------------------------------------------------------------
# serialization (inverse of parse_pack_document)


def _completion_doc(c: CompletionCriteria) -> dict[str, Any]:
    doc: dict[str, Any] = {"rule": c.rule.value}
    if c.n is not None:
        doc["n"] = c.n
    return doc


def _question_doc(q: QuestionDef) -> dict[str, Any]:
    doc: dict[str, Any] = {"id": q.question_id, "form": q.form.value, "stem": q.stem, "tags": list(q.concept_tags)}
    if q.form is QuestionForm.MATCHING:
        doc["pairs"] = dict(q.pairs or {})
    elif q.form is QuestionForm.MULTIPLE_CHOICE:
        doc["options"] = list(q.options or [])
        doc["correct_index"] = q.correct_index
    elif q.form is QuestionForm.ORDERING:
        doc["items"] = list(q.items or [])
    else:
        doc["statement"] = q.statement
        doc["truth"] = q.truth
    return doc


def serialize_pack(pack: ContentPack) -> dict[str, Any]:
    """Render a pack back to its JSON document form (load ∘ serialize is identity)."""
    return {
        "pack_id": pack.pack_id,
        "stages": list(pack.stages),
        "tasks": [
            {
                "id": t.task_id,
                "title": t.title,
                "description": t.description,
                "subtasks": [
                    {
                        "id": s.subtask_id,
                        "kind": s.kind.value,
                        "title": s.title,
                        "description": s.description,
                        "estimated_minutes": s.estimated_minutes,
                        "content_ref": s.content_ref,
                        "completion": _completion_doc(s.completion),
                        "depends_on": list(s.depends_on),
                    }
                    for s in t.subtasks
                ],
                "depends_on": list(t.depends_on),
            }
            for t in pack.tasks
        ],
        "questions": [_question_doc(q) for q in pack.question_bank],
        "papers": [
            {"id": p.paper_id, "title": p.title, "abstract": p.abstract, "body": p.body} for p in pack.papers
        ],
        "personas": [
            {
                "id": p.persona_id,
                "professor_name": p.professor_name,
                "department": p.department,
                "university": p.university,
                "research_field": p.research_field,
                "research_directions": list(p.research_directions),
            }
            for p in pack.personas
        ],
        "prompts": {
            agent.value: {
                "system": t.system_template,
                "user": t.user_template,
                "placeholders": list(t.placeholders),
                "reply_word_limit": t.reply_word_limit,
            }
            for agent, t in pack.prompt_templates.items()
        },
        "enhancement": {
            "srl_enabled": pack.enhancement.srl_enabled,
            "monitor_sampling_seconds": pack.enhancement.monitor_sampling_seconds,
            "quiz_hint_policy": pack.enhancement.quiz_hint_policy,
        },
    }


# ---------------------------------------------------------------------------
# ordering helpers


def topological_order(pack: ContentPack, task_id: str) -> list[str]:
    """Dependency-respecting subtask order for one task, ties broken by declaration order."""
    task = pack.task(task_id)
    declared = [s.subtask_id for s in task.subtasks]
    deps = {s.subtask_id: set(s.depends_on) for s in task.subtasks}
    done: set[str] = set()
    order: list[str] = []
    while len(order) < len(declared):
        progressed = False
        for sid in declared:
            if sid in done:
                continue
            if deps[sid] <= done:
                order.append(sid)
                done.add(sid)
                progressed = True
                break
        if not progressed:
            pending = [s for s in declared if s not in done]
            raise CycleError(f"dependency cycle among subtasks {','.join(pending)} of task {task_id}")
    return order


def task_order(pack: ContentPack) -> list[str]:
    """Dependency-respecting task order, ties broken by declaration order."""
    declared = [t.task_id for t in pack.tasks]
    deps = {t.task_id: set(t.depends_on) for t in pack.tasks}
    done: set[str] = set()
    order: list[str] = []
    while len(order) < len(declared):
        progressed = False
        for tid in declared:
            if tid in done:
                continue
            if deps[tid] <= done:
                order.append(tid)
                done.add(tid)
                progressed = True
                break
        if not progressed:
            pending = [t for t in declared if t not in done]
            raise CycleError(f"dependency cycle among tasks {','.join(pending)}")
    return order


def session_subtask_order(pack: ContentPack) -> list[str]:
    """All subtask ids across tasks: tasks topologically, subtasks topologically within."""
    return [sid for tid in task_order(pack) for sid in topological_order(pack, tid)]


def effective_dependencies(pack: ContentPack, subtask_id: str) -> set[str]:
    """Explicit subtask dependencies plus every subtask of tasks the parent depends on."""
    sub = pack.subtask(subtask_id)
    deps = set(sub.depends_on)
    parent = pack.task_of(subtask_id)
    for tid in parent.depends_on:
        deps.update(s.subtask_id for s in pack.task(tid).subtasks)
    return deps


# ---------------------------------------------------------------------------
# answer checking


def check_answer(question: QuestionDef, answer: Any) -> bool:
    """True iff the learner's answer matches the question's key."""
    if question.form is QuestionForm.MATCHING:
        return isinstance(answer, Mapping) and dict(answer) == question.pairs
    if question.form is QuestionForm.MULTIPLE_CHOICE:
        return isinstance(answer, int) and not isinstance(answer, bool) and answer == question.correct_index
    if question.form is QuestionForm.ORDERING:
        return isinstance(answer, list) and list(answer) == question.items
    return isinstance(answer, bool) and answer == question.truth
