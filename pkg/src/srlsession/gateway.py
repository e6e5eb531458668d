"""Chat-completion provider abstraction: a remote HTTP backend or a deterministic mock.

The mock is the test oracle for everything agent-shaped. It detects which agent
assembled the prompt purely from structural markers in the message text, then
emits a format-compliant reply chosen deterministically from (messages, seed).
"""

from __future__ import annotations

import enum
import hashlib
import os
import random
import time
from dataclasses import dataclass, field
from typing import Optional

import httpx


class GatewayError(Exception):
    """Base class for provider failures."""


class GatewayTimeout(GatewayError):
    """Request exceeded the configured timeout (after retries)."""


class AuthError(GatewayError):
    """Credentials rejected; never retried."""


class RateLimitError(GatewayError):
    """Provider throttled the request even after retries."""


class MalformedResponse(GatewayError):
    """Provider returned something that is not a chat completion."""


class Provider(str, enum.Enum):
    REMOTE_HTTP = "remote_http"
    MOCK = "mock"


@dataclass
class ProviderConfig:
    provider: Provider = Provider.MOCK
    base_url: Optional[str] = None
    model: Optional[str] = None
    api_key_env: str = "SRL_LLM_API_KEY"
    seed: int = 0
    request_timeout_seconds: float = 30.0
    max_retries: int = 2

    def validate(self) -> None:
        if self.provider is Provider.REMOTE_HTTP:
            if not self.base_url or not self.model:
                raise ValueError("remote provider requires base_url and model")
            if not os.environ.get(self.api_key_env):
                raise ValueError(f"remote provider requires the {self.api_key_env} env var")
        if self.request_timeout_seconds <= 0:
            raise ValueError("request_timeout_seconds must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")

    @classmethod
    def from_env(cls) -> "ProviderConfig":
        """Remote config from SRL_LLM_* env vars; falls back to the mock if unset."""
        base_url = os.environ.get("SRL_LLM_BASE_URL")
        if not base_url:
            return cls(provider=Provider.MOCK)
        return cls(
            provider=Provider.REMOTE_HTTP,
            base_url=base_url,
            model=os.environ.get("SRL_LLM_MODEL", ""),
            request_timeout_seconds=float(os.environ.get("SRL_LLM_TIMEOUT_S", "30")),
        )


@dataclass
class ChatMessage:
    role: str  # system | user | assistant
    content: str


@dataclass
class CompletionResult:
    text: str
    latency_ms: int = 0
    provider_meta: dict = field(default_factory=dict)


def _check_messages(messages: list[ChatMessage]) -> None:
    if not messages or messages[0].role != "system":
        raise ValueError("messages must begin with a system message")
    if sum(1 for m in messages if m.role == "system") != 1:
        raise ValueError("exactly one system message is allowed")
    for m in messages:
        if m.role not in ("system", "user", "assistant"):
            raise ValueError(f"unknown role {m.role!r}")
        if not m.content:
            raise ValueError("message content must be non-empty")


def complete(messages: list[ChatMessage], cfg: ProviderConfig) -> CompletionResult:
    """Route a completion to the configured provider with retry/backoff."""
    cfg.validate()
    _check_messages(messages)
    if cfg.provider is Provider.MOCK:
        return mock_complete(messages, cfg.seed)
    return _remote_complete(messages, cfg)


def _remote_complete(messages: list[ChatMessage], cfg: ProviderConfig) -> CompletionResult:
    url = cfg.base_url.rstrip("/") + "/chat/completions"
    headers = {"Authorization": f"Bearer {os.environ[cfg.api_key_env]}"}
    body = {
        "model": cfg.model,
        "messages": [{"role": m.role, "content": m.content} for m in messages],
    }
    last_error: GatewayError = GatewayTimeout("request never attempted")
    for attempt in range(1 + cfg.max_retries):
        if attempt:
            time.sleep(min(0.5 * 2 ** (attempt - 1), 8.0))
        started = time.monotonic()
        try:
            response = httpx.post(
                url, json=body, headers=headers, timeout=cfg.request_timeout_seconds
            )
        except httpx.TimeoutException as exc:
            last_error = GatewayTimeout(str(exc))
            continue
        except httpx.HTTPError as exc:
            last_error = GatewayError(str(exc))
            continue
        latency_ms = int((time.monotonic() - started) * 1000)
        if response.status_code in (401, 403):
            raise AuthError(f"provider rejected credentials ({response.status_code})")
        if response.status_code == 429:
            last_error = RateLimitError("provider throttled the request")
            continue
        if response.status_code >= 500:
            last_error = GatewayError(f"provider error {response.status_code}")
            continue
        try:
            payload = response.json()
            text = payload["choices"][0]["message"]["content"]
        except Exception as exc:
            raise MalformedResponse(f"unexpected completion shape: {exc}") from exc
        if not isinstance(text, str) or not text:
            raise MalformedResponse("completion text missing")
        return CompletionResult(
            text=text,
            latency_ms=latency_ms,
            provider_meta={"provider": "remote_http", "model": cfg.model},
        )
    raise last_error


# ---------------------------------------------------------------------------
# deterministic mock

# Structural markers the mock uses to recognize which agent assembled the prompt.
PLANNING_MARKER = "# Task Planning Request"
QUIZ_MARKER = "# Question Support Request"
REFLECTION_MARKER = "# Reflection Request"
REVIEW_MARKER = "You are an academic review expert"
WRITING_MARKER = "You are an expert in adaptive paper writing"

_QUIZ_HINTS = [
    "Revisit the core definition first, then rule out any option that describes a different concept entirely.",
    "Compare each candidate against the reading; only one matches every part of the definition.",
    "Think about what the concept does in practice, not what it is called.",
    "Check which step logically must happen before the others can make sense.",
    "Focus on the relationship named in the question; the distractors describe neighboring ideas.",
]

_REFLECTIONS = [
    "You completed the task steadily and followed your plan. Next time leave more room for review and write down one concrete improvement goal before starting.",
    "Solid execution overall. Your time estimates ran tight on the writing work, so plan a buffer there and keep using the quiz feedback to close gaps.",
    "Good progress across all subtasks. Consider reflecting mid-task, not only at the end, and revisit the concepts you missed on the first quiz attempt.",
]

_REVIEWS = [
    "Clear problem, simple method, modest but honest gains. Strengths: clarity and careful evaluation. Weaknesses: small scale and untested generalization beyond the benchmark.",
    "The paper contributes a clean framing and a reproducible method. Main limitation: evidence is narrow, so treat the headline claim as promising rather than settled.",
]

_WRITING_TIPS = [
    "Start with a one-sentence claim, support it with two findings from your earlier subtasks, then close with a limitation and a next step. Keep paragraphs short and cite the paper you reviewed.",
    "State the goal you recorded, organize the body as claim, evidence, implication, and end with one open question. Trim any sentence that does not serve the goal.",
]

_CHAT_REPLIES = [
    "Welcome to my office. That is a thoughtful question; in my field we usually begin by separating the model from the tools it calls. Which part interests you most?",
    "Good question. My group approaches this by studying how an agent decides its next step, and the failure cases are often more instructive than the successes.",
    "Happy to discuss that. Start from a concrete task the agent should finish, then work backwards to the capabilities it needs; students find that framing clarifying.",
]


def _digest(messages: list[ChatMessage], seed: int) -> int:
    hasher = hashlib.sha256()
    for m in messages:
        hasher.update(m.role.encode("utf-8"))
        hasher.update(b"\x00")
        hasher.update(m.content.encode("utf-8"))
        hasher.update(b"\x00")
    hasher.update(str(seed).encode("utf-8"))
    return int.from_bytes(hasher.digest()[:8], "big")


def _count_listed_subtasks(text: str) -> int:
    """Highest leading 'N.' item number in the prompt's subtask list section."""
    best = 0
    in_list = False
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("## Subtask List:"):
            in_list = True
            continue
        if in_list and stripped.startswith("## "):
            break
        if in_list:
            head, sep, _ = stripped.partition(". ")
            if sep and head.isdigit():
                best = max(best, int(head))
    return best


def _planning_reply(messages: list[ChatMessage], digest: int) -> str:
    last_user = next((m.content for m in reversed(messages) if m.role == "user"), "")
    n = _count_listed_subtasks(last_user) or 1
    order = list(range(1, n + 1))
    random.Random(digest).shuffle(order)
    sequence = ",".join(str(i) for i in order)
    return (
        "1. **Optimal Sequence:**\n"
        f"<START>\n{sequence}\n<END>\n\n"
        "2. **Reasoning:**\n"
        "Dependencies come first, then the heavier reading, keeping writing last so "
        "earlier outcomes feed it.\n\n"
        "3. **Completion Strategy:**\n"
        "Work in focused blocks, check the monitor after each subtask, and leave a "
        "buffer before the final report."
    )


def mock_complete(messages: list[ChatMessage], seed: int) -> CompletionResult:
    """Deterministic stand-in for a hosted model; equal inputs give byte-equal text."""
    digest = _digest(messages, seed)
    joined = "\n".join(m.content for m in messages)
    if PLANNING_MARKER in joined:
        text, intent = _planning_reply(messages, digest), "planning"
    elif QUIZ_MARKER in joined:
        text, intent = _QUIZ_HINTS[digest % len(_QUIZ_HINTS)], "quiz_hint"
    elif REFLECTION_MARKER in joined:
        text, intent = _REFLECTIONS[digest % len(_REFLECTIONS)], "reflection"
    elif REVIEW_MARKER in joined:
        text, intent = _REVIEWS[digest % len(_REVIEWS)], "review"
    elif WRITING_MARKER in joined:
        text, intent = _WRITING_TIPS[digest % len(_WRITING_TIPS)], "writing"
    else:
        text, intent = _CHAT_REPLIES[digest % len(_CHAT_REPLIES)], "chat"
    return CompletionResult(text=text, latency_ms=0, provider_meta={"provider": "mock", "intent": intent})
