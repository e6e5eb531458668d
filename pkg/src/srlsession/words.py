"""Word counting and truncation shared by completion rules and reply budgets."""

from __future__ import annotations


def count_words(text: str) -> int:
    """Number of whitespace-separated tokens; punctuation stays attached."""
    return len(text.split())


def truncate_words(text: str, limit: int) -> str:
    """First ``limit`` whitespace-separated tokens, single-space joined, no marker."""
    tokens = text.split()
    if len(tokens) <= limit:
        return text
    return " ".join(tokens[:limit])
