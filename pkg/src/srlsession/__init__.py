"""Learning-session orchestration service.

A game-engine-agnostic backend for scaffolded learning sessions: validated
content packs, a four-stage session state machine with dependency-gated
subtasks, self-regulated-learning supports (planning, time budgeting,
monitoring, reflection), six specialized LLM agent roles behind a provider
gateway with a deterministic mock, survey and quiz scoring, append-only
event-sourced persistence, and a scripted simulation harness.
"""

__version__ = "0.1.0"

__all__ = [
    "agents",
    "assessment",
    "content",
    "engine",
    "events",
    "gateway",
    "harness",
    "service",
    "srl",
    "words",
]
