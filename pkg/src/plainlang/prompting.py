"""Prompt construction for simplification, rephrasing, synonyms, definitions.

Prompt wording lives in versioned template files under
``plainlang/templates``; this module only selects templates, fills
placeholders, and wraps the payload text in source markers so a response
handler (or the echo mock) can recover it byte-for-byte.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .core import Audience


class EmptyText(ValueError):
    """Raised when a prompt builder receives empty or whitespace-only text."""


class WordNotInContext(ValueError):
    """Raised when the target word does not occur in its context sentence."""


SOURCE_BEGIN = "<<<BEGIN SOURCE>>>"
SOURCE_END = "<<<END SOURCE>>>"

SIMPLIFY_TEMPERATURE = 0.3
EXPERT_TEMPERATURE = 0.2
MIN_OUTPUT_TOKENS = 256


@dataclass(frozen=True)
class PromptBundle:
    """A ready-to-send system/user message pair with decoding settings."""

    system_message: str
    user_message: str
    temperature: float
    max_output_tokens: int

    def __post_init__(self) -> None:
        if not self.system_message or not self.user_message:
            raise ValueError("prompt messages must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature out of range: {self.temperature}")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")


@dataclass(frozen=True)
class ComplexityLevel:
    """Rephrasing register: 1 is simplest, 3 is closest to the original."""

    level: int

    def __post_init__(self) -> None:
        if self.level not in (1, 2, 3):
            raise ValueError(f"complexity level must be 1, 2, or 3, got {self.level}")


@lru_cache(maxsize=None)
def _load(name: str) -> str:
    path = resources.files("plainlang").joinpath("templates", name)
    return path.read_text(encoding="utf-8").rstrip("\n")


def template_version() -> str:
    return _load("VERSION").strip()


_PLACEHOLDER = re.compile(r"\{\{(\w+)\}\}")


def _render(template_name: str, **values: str) -> str:
    """Fill {{name}} placeholders in a single pass.

    Single-pass substitution means placeholder-like strings inside values
    (user text) are never re-expanded.
    """
    template = _load(template_name)

    def sub(match: re.Match) -> str:
        key = match.group(1)
        if key not in values:
            raise KeyError(f"template {template_name} needs undefined placeholder {key}")
        return values[key]

    return _PLACEHOLDER.sub(sub, template)


def _estimate_tokens(text: str) -> int:
    # Rough chat-model tokenization: ~4 characters per token.
    return max(1, math.ceil(len(text) / 4))


def audience_block(audience: Audience) -> str:
    return _load(f"audience_{audience.label}.txt")


def level_block(level: ComplexityLevel) -> str:
    return _load(f"level_{level.level}.txt")


def build_simplify_prompt(text: str, audience: Audience = Audience.GENERAL_PUBLIC) -> PromptBundle:
    """Audience-conditioned zero-shot simplification prompt.

    The source text is embedded verbatim between the source markers;
    :func:`extract_source` recovers it exactly.
    """
    if not text.strip():
        raise EmptyText("cannot build a simplify prompt for empty text")
    return PromptBundle(
        system_message=_render("simplify_system.txt", audience_block=audience_block(audience)),
        user_message=_render("simplify_user.txt", text=text),
        temperature=SIMPLIFY_TEMPERATURE,
        max_output_tokens=2 * _estimate_tokens(text) + MIN_OUTPUT_TOKENS,
    )


def build_rephrase_prompt(sentence: str, level: ComplexityLevel) -> PromptBundle:
    """One rephrasing of one sentence at the named complexity level.

    The level descriptor appears in the user message as well as the
    system message so that requests for different levels stay distinct
    on the wire (scripted transcripts key on the user message).
    """
    if not sentence.strip():
        raise EmptyText("cannot build a rephrase prompt for an empty sentence")
    descriptor = level_block(level)
    return PromptBundle(
        system_message=_render("rephrase_system.txt", level=descriptor),
        user_message=_render("rephrase_user.txt", sentence=sentence, level=descriptor),
        temperature=SIMPLIFY_TEMPERATURE,
        max_output_tokens=2 * _estimate_tokens(sentence) + MIN_OUTPUT_TOKENS,
    )


def _check_word_in_context(word: str, context_sentence: str) -> None:
    if not word.strip():
        raise EmptyText("word must be non-empty")
    if not context_sentence.strip():
        raise EmptyText("context sentence must be non-empty")
    if word.casefold() not in context_sentence.casefold():
        raise WordNotInContext(f"{word!r} does not occur in the given sentence")


def build_synonym_prompt(word: str, context_sentence: str) -> PromptBundle:
    """Up to five simpler synonyms, requested as a strict JSON array."""
    _check_word_in_context(word, context_sentence)
    return PromptBundle(
        system_message=_load("synonyms_system.txt"),
        user_message=_render("synonyms_user.txt", word=word, sentence=context_sentence),
        temperature=EXPERT_TEMPERATURE,
        max_output_tokens=MIN_OUTPUT_TOKENS,
    )


def build_definition_prompt(word: str, context_sentence: str) -> PromptBundle:
    """One plain-language definition, requested as a strict JSON object."""
    _check_word_in_context(word, context_sentence)
    return PromptBundle(
        system_message=_load("definition_system.txt"),
        user_message=_render("definition_user.txt", word=word, sentence=context_sentence),
        temperature=EXPERT_TEMPERATURE,
        max_output_tokens=MIN_OUTPUT_TOKENS,
    )


def extract_source(user_message: str) -> str:
    """Recover the payload placed between the source markers.

    Works for any payload, including payloads that themselves contain the
    marker strings: the opening marker is the first occurrence (the fixed
    instruction text never contains it) and the closing marker is the last.
    """
    begin = SOURCE_BEGIN + "\n"
    start = user_message.index(begin) + len(begin)
    end = user_message.rindex("\n" + SOURCE_END)
    return user_message[start:end]
