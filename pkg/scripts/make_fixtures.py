#!/usr/bin/env python3
"""Generate the repo's fixture corpus: content packs, pack schema, instruments,
and learner scripts. Regenerating is idempotent; every artifact is verified by
loading it back through the package before the script reports success.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO_ROOT / "src"))

from srlsession.content import load_pack  # noqa: E402
from srlsession.harness import load_instruments, load_script, validate_script  # noqa: E402

FIXTURES = REPO_ROOT / "fixtures"


# ---------------------------------------------------------------------------
# agent prompt templates (system text ends with the running chat history)


PLANNING_SYSTEM = """You are a Task Planning Assistant specializing in Self-Regulated Learning strategies. Your role is to help students develop effective task planning skills by analyzing subtasks, suggesting optimal ordering, and providing strategic guidance. Format your responses with clear structure and reasoning to model effective planning processes.

{chatHistory}"""

PLANNING_USER = """# Task Planning Request

I'm working on the Self-Regulated Learning (SRL) task planning phase. Please help me organize the following subtasks efficiently while developing my SRL thinking.

## Considerations:
* Task dependencies and logical sequence
* Resource utilization efficiency
* Time and difficulty balance

## Subtask List:
1. {Subtask title}
   * Description: {Subtask description}
   * Estimated time: {Time estimate}

2. {Additional subtasks...}

## Response Format Requirements:
1. **Optimal Sequence:**
   <START>
   Comma-separated task numbers in optimal order (e.g., 3,1,5,2,4)
   <END>

2. **Reasoning:**
   Explain the rationale behind this sequence

3. **Completion Strategy:**
   Provide recommendations for effective task execution

*Note: The <START> and <END> tags are required for automated processing.*"""

REFLECTION_SYSTEM = """You are a Reflection Agent specializing in Self-Regulated Learning (SRL) strategies. Your role is to help learners develop effective reflection skills by analyzing their task performance, identifying strengths and areas for improvement, and guiding them through meaningful self-evaluation.

When providing reflection guidance:
1. Focus on specific task outcomes and SRL strategies used
2. Highlight connections between planning, execution, and results
3. Encourage metacognitive thinking about learning processes
4. Suggest actionable improvements for future learning tasks

Keep your feedback concise, constructive, and clearly structured.

{chatHistory}"""

REFLECTION_USER = """# Reflection Request

I'm in the reflection phase of my Self-Regulated Learning (SRL) process. Please help me analyze my task performance and generate meaningful insights.

## Task Information:
* Task Title: {Task title}
* Task Description: {Task description}

## Subtask Completion Details:

{Subtask outcomes will be listed here}

## Reflection Requirements:
1. **Performance Summary:** (30 words maximum)
   Provide a concise assessment of task execution

2. **SRL Strategy Analysis:**
   Identify which self-regulated learning strategies were effectively applied

3. **Learning Insights:**
   Highlight key takeaways and potential improvements for future tasks

Please focus on both the task outcomes and the learning process itself, helping me develop stronger self-regulation skills."""

QUIZ_TUTOR_SYSTEM = """You are an educational support agent specializing in university-level academic content. Your role is to provide concise, helpful guidance when students encounter difficulties with different question types.

The student is currently in the Performance phase of Self-Regulated Learning (SRL), working on knowledge acquisition subtasks. Your support should reinforce effective learning strategies while providing just enough guidance to overcome obstacles.

Keep explanations brief (under 20 words) while maintaining clarity and educational value. Focus on promoting understanding rather than simply providing answers.

{chatHistory}"""

QUIZ_TUTOR_USER = """# Question Support Request

I need help with {question type}.

{question details}

Please provide targeted guidance that helps me understand the conceptual relationships without giving away complete answers. Focus on promoting learning rather than simply providing solutions."""

CHATTING_SYSTEM = """You are Professor {professor name} from the {department} at {university}, a leading expert in the field of {research field}.

Your research interests in {specific area} include {research direction 1}, {research direction 2},...

You provide academic guidance in your field, including research directions, paper writing, and experiment design.

You are welcoming students and answering their questions.

{chatHistory}"""

CHATTING_USER = "{user question}"

PAPER_REVIEW_SYSTEM = """You are an academic review expert. Please help players summarize the given paper abstract.

Players are performing the execution step in a self-regulated learning (SRL) strategy, and the abstract is the planning step.

Use critical thinking to help players understand the research ideas, core contributions, highlights, advantages and disadvantages of the paper.

No more than 30 words.

Please be concise, constructive, and clearly structured.

{chatHistory}"""

PAPER_REVIEW_USER = "{combinedInput}"

WRITING_SYSTEM = """You are an expert in adaptive paper writing. Your role is to assist the player in improving their adaptive writing skills, including structure, organization, and clarity.

Focus on the adaptive writing process and critical thinking strategies. Provide step-by-step guidance and examples where necessary.

Reply with no more than 50 words. Be concise and structured.

Pay attention to proper citation and referencing formats.

{chatHistory}"""

WRITING_USER = """{referenceContent}

Title: {title}
Body: {body}
Question: {question}"""


def prompt_templates() -> dict:
    return {
        "planning": {
            "system": PLANNING_SYSTEM,
            "user": PLANNING_USER,
            "placeholders": [
                "chatHistory",
                "Subtask title",
                "Subtask description",
                "Time estimate",
                "Additional subtasks...",
            ],
            "reply_word_limit": None,
        },
        "quiz_tutor": {
            "system": QUIZ_TUTOR_SYSTEM,
            "user": QUIZ_TUTOR_USER,
            "placeholders": ["chatHistory", "question type", "question details"],
            "reply_word_limit": 20,
        },
        "paper_review": {
            "system": PAPER_REVIEW_SYSTEM,
            "user": PAPER_REVIEW_USER,
            "placeholders": ["chatHistory", "combinedInput"],
            "reply_word_limit": 30,
        },
        "chatting": {
            "system": CHATTING_SYSTEM,
            "user": CHATTING_USER,
            "placeholders": [
                "chatHistory",
                "professor name",
                "department",
                "university",
                "research field",
                "specific area",
                "research direction 1",
                "research direction 2",
                "user question",
            ],
            "reply_word_limit": None,
        },
        "writing": {
            "system": WRITING_SYSTEM,
            "user": WRITING_USER,
            "placeholders": ["chatHistory", "referenceContent", "title", "body", "question"],
            "reply_word_limit": 50,
        },
        "reflection": {
            "system": REFLECTION_SYSTEM,
            "user": REFLECTION_USER,
            "placeholders": [
                "chatHistory",
                "Task title",
                "Task description",
                "Subtask outcomes will be listed here",
            ],
            "reply_word_limit": 30,
        },
    }


# ---------------------------------------------------------------------------
# content packs


STAGES = ["introduction", "planning", "task_process", "review"]

ENHANCEMENT = {
    "srl_enabled": True,
    "monitor_sampling_seconds": 30,
    "quiz_hint_policy": "on_wrong_attempt",
}


def full_pack() -> dict:
    return {
        "pack_id": "llm-agents-101",
        "stages": STAGES,
        "tasks": [
            {
                "id": "t-foundations",
                "title": "Foundations of Language Agents",
                "description": "Build the base vocabulary: what a language agent is, what its loop looks like, and how tools fit in.",
                "subtasks": [
                    {
                        "id": "st-read-primer",
                        "kind": "knowledge",
                        "title": "Read the agent primer",
                        "description": "Read the survey of language-agent architectures and summarize it in your own words.",
                        "estimated_minutes": 10,
                        "content_ref": "agents-survey",
                        "completion": {"rule": "summary_submitted"},
                    },
                    {
                        "id": "st-concept-quiz",
                        "kind": "quiz",
                        "title": "Concept check quiz",
                        "description": "Answer the concept questions about agent loops, tools, and planning.",
                        "estimated_minutes": 10,
                        "content_ref": "llm-agent-basics",
                        "completion": {"rule": "all_questions_correct"},
                        "depends_on": ["st-read-primer"],
                    },
                ],
            },
            {
                "id": "t-literature",
                "title": "Reading the Planning Literature",
                "description": "Work through one research paper on agent planning and write a short critical review.",
                "depends_on": ["t-foundations"],
                "subtasks": [
                    {
                        "id": "st-read-paper",
                        "kind": "paper",
                        "title": "Read the planning paper",
                        "description": "Read the assigned paper on staged planning for language agents and summarize its argument.",
                        "estimated_minutes": 15,
                        "content_ref": "planning-paper",
                        "completion": {"rule": "summary_submitted"},
                    },
                    {
                        "id": "st-review-paper",
                        "kind": "review",
                        "title": "Write a critical review",
                        "description": "Write a short review of the paper: contributions, strengths, and weaknesses.",
                        "estimated_minutes": 10,
                        "content_ref": "planning-paper",
                        "completion": {"rule": "min_words", "n": 30},
                        "depends_on": ["st-read-paper"],
                    },
                ],
            },
            {
                "id": "t-seminar",
                "title": "Office Hours Seminar",
                "description": "Discuss open questions with the professor persona and record what you learned.",
                "depends_on": ["t-foundations"],
                "subtasks": [
                    {
                        "id": "st-office-hours",
                        "kind": "discussion",
                        "title": "Attend office hours",
                        "description": "Ask the professor at least three substantive questions about agent research practice.",
                        "estimated_minutes": 10,
                        "content_ref": "prof-ide",
                        "completion": {"rule": "min_chat_turns", "n": 3},
                    },
                    {
                        "id": "st-insight-memo",
                        "kind": "insight",
                        "title": "Write an insight memo",
                        "description": "Capture the key insights from the discussion in a short memo.",
                        "estimated_minutes": 5,
                        "content_ref": "prof-ide",
                        "completion": {"rule": "min_words", "n": 25},
                        "depends_on": ["st-office-hours"],
                    },
                ],
            },
            {
                "id": "t-synthesis",
                "title": "Synthesis Report",
                "description": "Set a writing goal and produce a final report that synthesizes everything covered.",
                "depends_on": ["t-literature", "t-seminar"],
                "subtasks": [
                    {
                        "id": "st-writing-goal",
                        "kind": "writing_goal",
                        "title": "Set the report goal",
                        "description": "Record a concrete goal for the synthesis report before drafting it.",
                        "estimated_minutes": 5,
                        "content_ref": "writing-guide",
                        "completion": {"rule": "goal_recorded"},
                    },
                    {
                        "id": "st-report",
                        "kind": "report",
                        "title": "Write the synthesis report",
                        "description": "Write the final report connecting the primer, the paper, and the seminar discussion.",
                        "estimated_minutes": 15,
                        "content_ref": "st-writing-goal",
                        "completion": {"rule": "min_words", "n": 60},
                        "depends_on": ["st-writing-goal"],
                    },
                ],
            },
        ],
        "questions": [
            {
                "id": "q-match",
                "form": "matching",
                "stem": "Match each agent-loop term to its description.",
                "tags": ["llm-agent-basics"],
                "pairs": {
                    "observe": "gather state",
                    "plan": "choose action",
                    "act": "apply action",
                },
            },
            {
                "id": "q-mc",
                "form": "multiple_choice",
                "stem": "What does a tool call let a language agent do?",
                "tags": ["llm-agent-basics"],
                "options": [
                    "Act on an external system",
                    "Train its own weights",
                    "Erase its context window",
                    "Skip evaluation",
                ],
                "correct_index": 0,
            },
            {
                "id": "q-order",
                "form": "ordering",
                "stem": "Order the steps of one agent loop iteration.",
                "tags": ["llm-agent-basics"],
                "items": [
                    "Observe the current state",
                    "Decide on an action",
                    "Invoke the chosen tool",
                    "Incorporate the result",
                ],
            },
            {
                "id": "q-tf",
                "form": "true_false",
                "stem": "Judge the statement about plan revision.",
                "tags": ["llm-agent-basics"],
                "statement": "A language agent can revise its plan after observing a tool result.",
                "truth": True,
            },
        ],
        "papers": [
            {
                "id": "agents-survey",
                "title": "A Short Survey of Language-Agent Architectures",
                "abstract": "We survey the common architecture of language agents: a model core, a tool interface, a memory store, and a control loop that alternates decision and observation.",
                "body": "Language agents wrap a language model in a control loop. Each iteration observes the environment, decides on an action, invokes a tool, and incorporates the result into working memory. Tool interfaces define what the agent can affect; schemas constrain arguments so that malformed calls fail fast. Memory spans the current context window and any external store the loop consults. Planning modules order subgoals before acting, which shortens recovery when a tool call fails. Evaluation of agents is hardest where behavior compounds: small early errors grow, so replayable logs of every decision step are the main instrument for analysis.",
            },
            {
                "id": "planning-paper",
                "title": "Staged Planning Improves Tool-Using Agents",
                "abstract": "We show that agents which commit to an explicit subgoal ordering before acting recover from tool failures faster than agents that improvise, across three simulated environments.",
                "body": "This paper studies whether explicit planning helps tool-using agents. The authors compare improvised agents against staged planners that order subgoals up front and revise the ordering only when observations contradict it. Across three simulated environments the staged planners recover from injected tool failures faster and complete more episodes. The analysis attributes the gap to cheaper credit assignment: with a committed ordering, a failure localizes to one subgoal instead of invalidating the whole trajectory. The paper's weaknesses are a narrow baseline set and environments whose dynamics are fully observable, which favors planners by construction.",
            },
            {
                "id": "writing-guide",
                "title": "Writing a Synthesis Report",
                "abstract": "A short guide to synthesizing sources: state a claim, support it from multiple sources, and close with open questions.",
                "body": "A synthesis report differs from a summary: it argues one claim using several sources. Open with the claim. Devote each paragraph to one line of support, citing where it came from. Treat disagreements between sources as findings, not noise. Close with the questions the sources leave open. Keep sentences short and concrete; cut any paragraph that does not serve the claim.",
            },
        ],
        "personas": [
            {
                "id": "prof-ide",
                "professor_name": "Elena Ide",
                "department": "Department of Computer Science",
                "university": "Aalto University",
                "research_field": "language agents and tool use",
                "research_directions": [
                    "tool-interface design for language agents",
                    "replayable evaluation of multi-step agent behavior",
                    "planning scaffolds for long-horizon tasks",
                ],
            }
        ],
        "prompts": prompt_templates(),
        "enhancement": ENHANCEMENT,
    }


def minimal_pack() -> dict:
    return {
        "pack_id": "minimal-basics",
        "stages": STAGES,
        "tasks": [
            {
                "id": "t-basics",
                "title": "Basics",
                "description": "One reading and one quiz, for small-scale checks.",
                "subtasks": [
                    {
                        "id": "st-read",
                        "kind": "knowledge",
                        "title": "Read the primer",
                        "description": "Read the two-paragraph primer and summarize it.",
                        "estimated_minutes": 5,
                        "content_ref": "primer",
                        "completion": {"rule": "summary_submitted"},
                    },
                    {
                        "id": "st-quiz",
                        "kind": "quiz",
                        "title": "Primer quiz",
                        "description": "Answer both questions about the primer.",
                        "estimated_minutes": 5,
                        "content_ref": "basics",
                        "completion": {"rule": "all_questions_correct"},
                        "depends_on": ["st-read"],
                    },
                ],
            }
        ],
        "questions": [
            {
                "id": "qm-mc",
                "form": "multiple_choice",
                "stem": "What does the control loop of an agent alternate between?",
                "tags": ["basics"],
                "options": [
                    "Decision and observation",
                    "Training and inference",
                    "Compression and expansion",
                    "Input and output layers",
                ],
                "correct_index": 0,
            },
            {
                "id": "qm-tf",
                "form": "true_false",
                "stem": "Judge the statement about tool schemas.",
                "tags": ["basics"],
                "statement": "Tool schemas constrain call arguments so malformed calls fail fast.",
                "truth": True,
            },
        ],
        "papers": [
            {
                "id": "primer",
                "title": "Agent Loop Primer",
                "abstract": "Two paragraphs on the agent loop.",
                "body": "An agent loop alternates decision and observation. The model decides on an action, a tool applies it, and the observed result feeds the next decision. Tool schemas constrain call arguments so malformed calls fail fast, which keeps errors local and logs readable.",
            }
        ],
        "personas": [],
        "prompts": prompt_templates(),
        "enhancement": ENHANCEMENT,
    }


# ---------------------------------------------------------------------------
# machine-readable pack schema (structural oracle used by the test suite)


def pack_schema() -> dict:
    non_empty_string = {"type": "string", "minLength": 1}
    string_array = {"type": "array", "items": {"type": "string"}}
    question_base = {
        "id": non_empty_string,
        "stem": non_empty_string,
        "tags": {"type": "array", "items": non_empty_string},
    }

    def question_variant(form: str, extra: dict) -> dict:
        return {
            "type": "object",
            "additionalProperties": False,
            "required": ["id", "form", "stem", "tags", *extra.keys()],
            "properties": {**question_base, "form": {"const": form}, **extra},
        }

    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": "pack.schema.json",
        "title": "Learning content pack",
        "type": "object",
        "additionalProperties": False,
        "required": [
            "pack_id",
            "stages",
            "tasks",
            "questions",
            "papers",
            "personas",
            "prompts",
            "enhancement",
        ],
        "properties": {
            "pack_id": non_empty_string,
            "stages": {
                "type": "array",
                "prefixItems": [
                    {"const": "introduction"},
                    {"const": "planning"},
                    {"const": "task_process"},
                    {"const": "review"},
                ],
                "minItems": 4,
                "maxItems": 4,
            },
            "tasks": {"type": "array", "minItems": 1, "items": {"$ref": "#/$defs/task"}},
            "questions": {"type": "array", "items": {"$ref": "#/$defs/question"}},
            "papers": {"type": "array", "items": {"$ref": "#/$defs/paper"}},
            "personas": {"type": "array", "items": {"$ref": "#/$defs/persona"}},
            "prompts": {
                "type": "object",
                "additionalProperties": False,
                "required": [
                    "planning",
                    "quiz_tutor",
                    "paper_review",
                    "chatting",
                    "writing",
                    "reflection",
                ],
                "properties": {
                    agent: {"$ref": "#/$defs/prompt"}
                    for agent in (
                        "planning",
                        "quiz_tutor",
                        "paper_review",
                        "chatting",
                        "writing",
                        "reflection",
                    )
                },
            },
            "enhancement": {
                "type": "object",
                "additionalProperties": False,
                "required": ["srl_enabled", "monitor_sampling_seconds", "quiz_hint_policy"],
                "properties": {
                    "srl_enabled": {"type": "boolean"},
                    "monitor_sampling_seconds": {"type": "integer", "exclusiveMinimum": 0},
                    "quiz_hint_policy": {"enum": ["on_wrong_attempt", "never"]},
                },
            },
        },
        "$defs": {
            "completion": {
                "oneOf": [
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["rule"],
                        "properties": {
                            "rule": {
                                "enum": [
                                    "all_questions_correct",
                                    "summary_submitted",
                                    "goal_recorded",
                                ]
                            }
                        },
                    },
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["rule", "n"],
                        "properties": {
                            "rule": {
                                "enum": [
                                    "min_questions_correct",
                                    "min_words",
                                    "min_chat_turns",
                                ]
                            },
                            "n": {"type": "integer", "exclusiveMinimum": 0},
                        },
                    },
                ]
            },
            "subtask": {
                "type": "object",
                "additionalProperties": False,
                "required": [
                    "id",
                    "kind",
                    "title",
                    "description",
                    "estimated_minutes",
                    "content_ref",
                    "completion",
                ],
                "properties": {
                    "id": non_empty_string,
                    "kind": {
                        "enum": [
                            "knowledge",
                            "quiz",
                            "paper",
                            "review",
                            "discussion",
                            "insight",
                            "writing_goal",
                            "report",
                        ]
                    },
                    "title": non_empty_string,
                    "description": non_empty_string,
                    "estimated_minutes": {"type": "integer", "exclusiveMinimum": 0},
                    "content_ref": non_empty_string,
                    "completion": {"$ref": "#/$defs/completion"},
                    "depends_on": string_array,
                },
            },
            "task": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "title", "description", "subtasks"],
                "properties": {
                    "id": non_empty_string,
                    "title": non_empty_string,
                    "description": non_empty_string,
                    "subtasks": {
                        "type": "array",
                        "minItems": 1,
                        "items": {"$ref": "#/$defs/subtask"},
                    },
                    "depends_on": string_array,
                },
            },
            "question": {
                "oneOf": [
                    question_variant(
                        "matching",
                        {
                            "pairs": {
                                "type": "object",
                                "minProperties": 1,
                                "additionalProperties": {"type": "string"},
                            }
                        },
                    ),
                    question_variant(
                        "multiple_choice",
                        {
                            "options": {
                                "type": "array",
                                "minItems": 2,
                                "items": {"type": "string"},
                            },
                            "correct_index": {"type": "integer", "minimum": 0},
                        },
                    ),
                    question_variant(
                        "ordering",
                        {"items": {"type": "array", "minItems": 2, "items": {"type": "string"}}},
                    ),
                    question_variant(
                        "true_false",
                        {"statement": non_empty_string, "truth": {"type": "boolean"}},
                    ),
                ]
            },
            "paper": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "title", "body"],
                "properties": {
                    "id": non_empty_string,
                    "title": non_empty_string,
                    "abstract": {"type": "string"},
                    "body": non_empty_string,
                },
            },
            "persona": {
                "type": "object",
                "additionalProperties": False,
                "required": [
                    "id",
                    "professor_name",
                    "department",
                    "university",
                    "research_field",
                    "research_directions",
                ],
                "properties": {
                    "id": non_empty_string,
                    "professor_name": non_empty_string,
                    "department": non_empty_string,
                    "university": non_empty_string,
                    "research_field": non_empty_string,
                    "research_directions": {
                        "type": "array",
                        "minItems": 1,
                        "items": non_empty_string,
                    },
                },
            },
            "prompt": {
                "type": "object",
                "additionalProperties": False,
                "required": ["system", "user", "placeholders"],
                "properties": {
                    "system": non_empty_string,
                    "user": {"type": "string"},
                    "placeholders": {"type": "array", "items": non_empty_string},
                    "reply_word_limit": {
                        "oneOf": [{"type": "null"}, {"type": "integer", "exclusiveMinimum": 0}]
                    },
                },
            },
        },
    }


# ---------------------------------------------------------------------------
# assessment instruments


ASLQ_ITEMS = [
    "I study in a suitable place where I can concentrate.",
    "When I am reading, I stop once in a while to review what I have read.",
    "I make necessary changes in study plan to improve learning.",
    "I don't feel motivated to study difficult subjects.",
    "I split my portions while studying.",
    "I go through the study material carefully to understand it properly.",
    "Before I start studying, I make a schedule.",
    "I try to strengthen the strategies that worked for me previously.",
    "I study in a manner that makes it more interesting/enjoyable.",
    "I use keywords/abbreviations to improve learning.",
    "When my studies are affected, I try to identify my mistakes.",
    "I learn by teaching others.",
    "I set targets before I start studying.",
    "While I am studying, I try to get rid of any distractions that are around me.",
    "I keep track of study areas where I am lacking.",
    "I don't have the habit of maintaining notes.",
    "I organize the study material before I start studying.",
    "After my exam I reflect upon areas I could have done better.",
    "I make notes to simplify learning.",
    "I try to learn from the mistakes I made in the exam.",
    "I constantly assess the amount of effort I put into my studies.",
    "I memorize key words to remind me of important concepts.",
    "Before I study, I make an outline of the content.",
    "I focus more on difficult portions while studying.",
    "I organize my time according to the difficulty of the task.",
    "I make sure that I complete the portions on time.",
    "If I miss a class, I take the help of others to cover the portions.",
    "I keep my assignments and class notes complete.",
    "I motivate myself to do better than before.",
    "While studying, I utilize different sources of information (lectures, reading, and discussions).",
    "I set a goal for how much to study each day.",
    "I make simple charts, diagrams, or tables while studying.",
    "I seek help when unable to understand a concept.",
    "When I study, I try to understand the concepts.",
    "I refer to my class notes whenever necessary.",
    "I make sure that I attend class regularly.",
]

ASLQ_REVERSE = {4, 16}  # negatively worded statements

# The 18-item study subset keeps the planning/monitoring/reflection spread and
# one reverse-worded statement (original item 4).
ASLQ18_SUBSET = [2, 3, 4, 7, 13, 15, 18, 20, 21, 24, 25, 26, 29, 31, 33, 34, 35, 36]

TRUST_ITEMS = [
    ("The AI is deceptive", True),
    ("The AI behaves in an underhanded manner", True),
    ("I am suspicious of the AI’s intent, action, or outputs", True),
    ("I am wary of the AI", True),
    ("The AI’s actions will have a harmful or injurious outcome", True),
    ("I am confident in the AI", False),
    ("The AI provides security", False),
    ("The AI has integrity", False),
    ("The AI is dependable", False),
    ("The AI is reliable", False),
    ("I can trust the AI", False),
    ("I am familiar with the AI", False),
]

UES_ITEMS = [
    # focused attention
    ("I lost myself in this experience.", "FA"),
    ("The time I spent using the app just slipped away.", "FA"),
    ("I was absorbed in the learning tasks.", "FA"),
    ("I felt like the session ended quickly.", "FA"),
    ("During the session I forgot about my surroundings.", "FA"),
    ("I was so involved that I ignored distractions around me.", "FA"),
    ("My attention stayed on the tasks without wandering.", "FA"),
    ("I felt immersed while working through the subtasks.", "FA"),
    # perceived usability (negatively worded; scored as answered)
    ("I felt frustrated while using this app.", "PA"),
    ("I found this app confusing to use.", "PA"),
    ("Using this app was taxing.", "PA"),
    ("The experience was demanding.", "PA"),
    ("I felt annoyed while completing the tasks.", "PA"),
    ("I felt discouraged while working in the app.", "PA"),
    ("The app's pacing made the session tiring.", "PA"),
    ("I could not tell what to do next in the app.", "PA"),
    # aesthetic appeal
    ("This app was attractive", "AE"),
    ("This app was aesthetically appealing.", "AE"),
    ("I liked the graphics and images used in this app.", "AE"),
    ("The screen layout of this app was visually pleasing.", "AE"),
    ("The look of the app matched what it does.", "AE"),
    ("The presentation of content felt polished.", "AE"),
    # reward
    ("Using app was worthwhile", "RW"),
    ("My learning experience was rewarding.", "RW"),
    ("I felt interested in this learning experience.", "RW"),
    ("The session felt like time well spent.", "RW"),
    ("I would recommend this learning app to my friends.", "RW"),
    ("The experience of learning this way was fun.", "RW"),
    ("I got something valuable out of the session.", "RW"),
    ("Working through the tasks left me satisfied.", "RW"),
]

QUIZ_QUESTIONS = [
    ("What is the main job of a planning step in an agent loop?", "Order subgoals before acting"),
    ("Which signal tells an agent that its tool call failed?", "The observation returned by the tool"),
    ("What does a memory store let an agent do?", "Reuse earlier findings in later steps"),
    ("Why log every agent decision?", "To replay and audit failures"),
    ("What bounds the quality of an agent's decisions?", "The quality of its observations"),
    ("When should an agent revise its plan?", "After observations contradict it"),
    ("What is a tool schema for?", "Declaring valid call arguments"),
    ("What makes an evaluation harness trustworthy?", "Deterministic replay of full runs"),
    ("What does dependency ordering between subtasks prevent?", "Working on a step before its inputs exist"),
    ("How should elapsed work time reach a wall-clock-free engine?", "As explicit tick inputs"),
    ("What is the benefit of bounding an assistant's reply length?", "Hints stay focused and quick to read"),
    ("Why compare study conditions with the same scripted actions?", "Differences then come from the feature set"),
]

QUIZ_DISTRACTORS = [
    ["Render the user interface", "Compress the training data", "Pick a random action"],
    ["The model's temperature", "The prompt template", "The token limit"],
    ["Increase its context window", "Train new weights online", "Skip observations"],
    ["To reduce latency", "To save disk space", "To make logs smaller"],
    ["The size of its prompt header", "The number of users", "The choice of font"],
    ["Never", "Only at startup", "After every token"],
    ["Styling the output", "Encrypting messages", "Counting tokens"],
    ["Attractive charts", "Large sample sizes alone", "Manual spot checks only"],
    ["Using too much memory", "Long prompts", "Slow rendering"],
    ["From the system clock", "From network time", "From request latency"],
    ["It trains the model", "It lowers API cost only", "It disables errors"],
    ["It is faster to run", "It removes all randomness", "Scripts are optional"],
]


def aslq_instrument(instrument_id: str, indices: list[int]) -> dict:
    return {
        "instrument_id": instrument_id,
        "kind": "aslq",
        "scale_min": 1,
        "scale_max": 7,
        "notes": "Self-regulated learning skills scale; overall score is the mean after reverse coding.",
        "items": [
            {"text": ASLQ_ITEMS[i - 1], "reverse": i in ASLQ_REVERSE}
            for i in indices
        ],
    }


def trust_instrument() -> dict:
    return {
        "instrument_id": "trust12",
        "kind": "trust",
        "scale_min": 1,
        "scale_max": 7,
        "notes": "Trust in the AI tutor; the five distrust items are reverse coded.",
        "items": [{"text": text, "reverse": reverse} for text, reverse in TRUST_ITEMS],
    }


def ues_instrument() -> dict:
    return {
        "instrument_id": "ues30",
        "kind": "ues",
        "scale_min": 1,
        "scale_max": 5,
        "notes": "Engagement scale; overall is the sum of the four subscale means (range 4-20).",
        "items": [{"text": text, "subscale": subscale} for text, subscale in UES_ITEMS],
    }


def knowledge_quiz_instrument() -> dict:
    items = []
    for i, ((stem, correct), distractors) in enumerate(zip(QUIZ_QUESTIONS, QUIZ_DISTRACTORS)):
        key = i % 4
        options = list(distractors)
        options.insert(key, correct)
        items.append({"text": stem, "options": options, "key": key})
    return {
        "instrument_id": "knowledge_quiz12",
        "kind": "knowledge_quiz",
        "scale_min": 0,
        "scale_max": 3,
        "notes": "Twelve multiple-choice items, one point each; responses are option indices.",
        "items": items,
    }


# ---------------------------------------------------------------------------
# learner scripts


REVIEW_TEXT = (
    "The paper proposes a staged planning loop for language agents and backs it "
    "with simulated classroom evidence. The structure is clear and the evaluation "
    "is careful, but the comparison baselines feel thin and transfer beyond the "
    "simulated setting remains untested in my reading."
)

INSIGHT_TEXT = (
    "Professor Ide stressed that tool interfaces shape agent behavior more than "
    "prompt wording, and that careful logging of every decision step makes "
    "failures reproducible. My takeaway is to design the evaluation harness "
    "before designing the agent itself."
)

REPORT_TEXT = (
    "Language agents pair a model with tools, memory, and a control loop. This "
    "report summarizes what I learned about building them responsibly. First, "
    "planning matters: agents that order subgoals explicitly recover from tool "
    "failures faster than agents that improvise. Second, observation quality "
    "bounds decision quality, so interfaces should return structured state rather "
    "than prose. Third, evaluation must replay full interaction logs, because "
    "aggregate scores hide compounding errors. I close with open questions about "
    "transfer to longer tasks and noisier environments."
)

PRIMER_SUMMARY = (
    "The primer describes agents as a model core plus tools, memory, and a "
    "control loop that alternates decision and observation."
)

PAPER_SUMMARY = (
    "The paper argues that committing to a subgoal ordering up front makes tool "
    "failures cheaper to recover from, and supports it across three simulated "
    "environments."
)

GOAL_TEXT = (
    "Write a 120-word synthesis connecting the primer's loop model, the planning "
    "paper's findings, and the office-hours discussion."
)

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

WRONG_MATCH = {"observe": "choose action", "plan": "gather state", "act": "apply action"}

ASLQ36_RESPONSES = [6, 5, 6, 2, 5, 6, 5, 6, 5, 6, 6, 4, 5, 6, 5, 3, 5, 6, 5, 6, 5, 5, 4, 6, 5, 6, 5, 5, 6, 5, 5, 4, 6, 6, 5, 6]
TRUST12_RESPONSES = [2, 2, 3, 2, 1, 6, 5, 6, 6, 6, 6, 5]
UES30_RESPONSES = [4, 5, 4, 4, 5, 4, 4, 4, 2, 2, 1, 2, 2, 1, 2, 2, 4, 4, 5, 4, 4, 4, 5, 5, 4, 5, 4, 4, 5, 4]
KNOWLEDGE_RESPONSES = [0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3]


def full_srl_script() -> dict:
    return {
        "script_id": "full-srl-coverage",
        "condition": "full_srl",
        "description": "Covers every stage and agent: plan with a suggestion, fail a quiz once to earn a hint, discuss, write, reflect, and answer all four instruments.",
        "actions": [
            {"do": "advance"},
            {"do": "plan_suggest"},
            {"do": "plan_record", "strategy_note": "Follow the suggested order; frontload reading."},
            {"do": "advance"},
            {"do": "start", "subtask": "st-read-primer"},
            {"do": "tick", "seconds": 300, "active": "st-read-primer"},
            {"do": "submit", "subtask": "st-read-primer", "summary": PRIMER_SUMMARY},
            {"do": "start", "subtask": "st-concept-quiz"},
            {"do": "tick", "seconds": 120, "active": "st-concept-quiz"},
            {
                "do": "submit",
                "subtask": "st-concept-quiz",
                "answers": {**CORRECT_ANSWERS, "q-match": WRONG_MATCH},
            },
            {
                "do": "chat",
                "interaction": "quiz_help",
                "subtask": "st-concept-quiz",
                "question_id": "q-match",
                "attempt": WRONG_MATCH,
            },
            {"do": "tick", "seconds": 60, "active": "st-concept-quiz"},
            {"do": "submit", "subtask": "st-concept-quiz", "answers": CORRECT_ANSWERS},
            {"do": "start", "subtask": "st-read-paper"},
            {"do": "tick", "seconds": 400, "active": "st-read-paper"},
            {"do": "submit", "subtask": "st-read-paper", "summary": PAPER_SUMMARY},
            {"do": "start", "subtask": "st-review-paper"},
            {
                "do": "chat",
                "interaction": "paper_help",
                "subtask": "st-review-paper",
                "text": "What are the core contributions I should weigh in my review?",
            },
            {"do": "tick", "seconds": 240, "active": "st-review-paper"},
            {"do": "submit", "subtask": "st-review-paper", "text": REVIEW_TEXT},
            {"do": "start", "subtask": "st-office-hours"},
            {
                "do": "chat",
                "interaction": "discussion_message",
                "subtask": "st-office-hours",
                "text": "How do you decide which tools an agent should get?",
            },
            {
                "do": "chat",
                "interaction": "discussion_message",
                "subtask": "st-office-hours",
                "text": "What failure modes show up most in long-horizon tasks?",
            },
            {
                "do": "chat",
                "interaction": "discussion_message",
                "subtask": "st-office-hours",
                "text": "How would you evaluate an agent beyond task success rates?",
            },
            {"do": "tick", "seconds": 300, "active": "st-office-hours"},
            {"do": "submit", "subtask": "st-office-hours"},
            {"do": "start", "subtask": "st-insight-memo"},
            {"do": "tick", "seconds": 120, "active": "st-insight-memo"},
            {"do": "submit", "subtask": "st-insight-memo", "text": INSIGHT_TEXT},
            {"do": "start", "subtask": "st-writing-goal"},
            {"do": "tick", "seconds": 60, "active": "st-writing-goal"},
            {"do": "submit", "subtask": "st-writing-goal", "goal": GOAL_TEXT},
            {"do": "start", "subtask": "st-report"},
            {
                "do": "chat",
                "interaction": "writing_help",
                "subtask": "st-report",
                "title": "Synthesis: Planning in Language Agents",
                "body": "Draft paragraph on staged planning and recovery from tool failures.",
                "text": "Does my draft connect the paper's findings to the seminar discussion?",
            },
            {"do": "tick", "seconds": 600, "active": "st-report"},
            {"do": "submit", "subtask": "st-report", "text": REPORT_TEXT},
            {"do": "advance"},
            {"do": "chat", "interaction": "reflection_request", "task_id": "t-foundations"},
            {"do": "respond_instrument", "instrument": "aslq36", "responses": ASLQ36_RESPONSES},
            {"do": "respond_instrument", "instrument": "trust12", "responses": TRUST12_RESPONSES},
            {"do": "respond_instrument", "instrument": "ues30", "responses": UES30_RESPONSES},
            {
                "do": "respond_instrument",
                "instrument": "knowledge_quiz12",
                "responses": KNOWLEDGE_RESPONSES,
            },
        ],
    }


def no_srl_script() -> dict:
    return {
        "script_id": "no-srl-coverage",
        "condition": "no_srl",
        "description": "Completes every subtask without any SRL feature: no plan, no hints, no reflection; only the professor chat is used.",
        "actions": [
            {"do": "advance"},
            {"do": "start", "subtask": "st-read-primer"},
            {"do": "tick", "seconds": 300, "active": "st-read-primer"},
            {"do": "submit", "subtask": "st-read-primer", "summary": PRIMER_SUMMARY},
            {"do": "start", "subtask": "st-concept-quiz"},
            {"do": "tick", "seconds": 180, "active": "st-concept-quiz"},
            {"do": "submit", "subtask": "st-concept-quiz", "answers": CORRECT_ANSWERS},
            {"do": "start", "subtask": "st-read-paper"},
            {"do": "tick", "seconds": 400, "active": "st-read-paper"},
            {"do": "submit", "subtask": "st-read-paper", "summary": PAPER_SUMMARY},
            {"do": "start", "subtask": "st-review-paper"},
            {"do": "tick", "seconds": 240, "active": "st-review-paper"},
            {"do": "submit", "subtask": "st-review-paper", "text": REVIEW_TEXT},
            {"do": "start", "subtask": "st-office-hours"},
            {
                "do": "chat",
                "interaction": "discussion_message",
                "subtask": "st-office-hours",
                "text": "How do you decide which tools an agent should get?",
            },
            {
                "do": "chat",
                "interaction": "discussion_message",
                "subtask": "st-office-hours",
                "text": "What failure modes show up most in long-horizon tasks?",
            },
            {
                "do": "chat",
                "interaction": "discussion_message",
                "subtask": "st-office-hours",
                "text": "How would you evaluate an agent beyond task success rates?",
            },
            {"do": "tick", "seconds": 300, "active": "st-office-hours"},
            {"do": "submit", "subtask": "st-office-hours"},
            {"do": "start", "subtask": "st-insight-memo"},
            {"do": "tick", "seconds": 120, "active": "st-insight-memo"},
            {"do": "submit", "subtask": "st-insight-memo", "text": INSIGHT_TEXT},
            {"do": "start", "subtask": "st-writing-goal"},
            {"do": "tick", "seconds": 60, "active": "st-writing-goal"},
            {"do": "submit", "subtask": "st-writing-goal", "goal": GOAL_TEXT},
            {"do": "start", "subtask": "st-report"},
            {"do": "tick", "seconds": 600, "active": "st-report"},
            {"do": "submit", "subtask": "st-report", "text": REPORT_TEXT},
            {"do": "advance"},
            {"do": "respond_instrument", "instrument": "ues30", "responses": UES30_RESPONSES},
            {
                "do": "respond_instrument",
                "instrument": "knowledge_quiz12",
                "responses": KNOWLEDGE_RESPONSES,
            },
        ],
    }


def abandonment_script() -> dict:
    return {
        "script_id": "abandonment-mid-process",
        "condition": "full_srl",
        "description": "Plans, completes the first reading, then fails the quiz once and walks away mid task-process.",
        "actions": [
            {"do": "advance"},
            {"do": "plan_record", "strategy_note": "Start with the reading."},
            {"do": "advance"},
            {"do": "start", "subtask": "st-read-primer"},
            {"do": "tick", "seconds": 240, "active": "st-read-primer"},
            {"do": "submit", "subtask": "st-read-primer", "summary": PRIMER_SUMMARY},
            {"do": "start", "subtask": "st-concept-quiz"},
            {"do": "tick", "seconds": 90, "active": "st-concept-quiz"},
            {
                "do": "submit",
                "subtask": "st-concept-quiz",
                "answers": {**CORRECT_ANSWERS, "q-match": WRONG_MATCH},
            },
        ],
    }


# ---------------------------------------------------------------------------
# writing and verification


def write_json(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def main() -> int:
    artifacts = {
        FIXTURES / "packs" / "full.json": full_pack(),
        FIXTURES / "packs" / "minimal.json": minimal_pack(),
        FIXTURES / "packs" / "pack.schema.json": pack_schema(),
        FIXTURES / "instruments" / "aslq36.json": aslq_instrument("aslq36", list(range(1, 37))),
        FIXTURES / "instruments" / "aslq18.json": aslq_instrument("aslq18", ASLQ18_SUBSET),
        FIXTURES / "instruments" / "trust12.json": trust_instrument(),
        FIXTURES / "instruments" / "ues30.json": ues_instrument(),
        FIXTURES / "instruments" / "knowledge_quiz12.json": knowledge_quiz_instrument(),
        FIXTURES / "scripts" / "full_srl.json": full_srl_script(),
        FIXTURES / "scripts" / "no_srl.json": no_srl_script(),
        FIXTURES / "scripts" / "abandonment.json": abandonment_script(),
    }
    for path, doc in artifacts.items():
        write_json(path, doc)
        print(f"wrote {path.relative_to(REPO_ROOT)}")

    # verify: everything loads back through the package's own strict loaders
    full = load_pack(FIXTURES / "packs" / "full.json")
    load_pack(FIXTURES / "packs" / "minimal.json")
    instruments = load_instruments(FIXTURES / "instruments")
    assert set(instruments) == {"aslq36", "aslq18", "trust12", "ues30", "knowledge_quiz12"}
    for name in ("full_srl", "no_srl", "abandonment"):
        script = load_script(FIXTURES / "scripts" / f"{name}.json")
        validate_script(script, full)
    print("all fixtures load and validate")
    return 0


if __name__ == "__main__":
    sys.exit(main())
