"""Shared domain types used across the service, metrics, and CLI."""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional


class UnknownAudience(ValueError):
    """Raised when a label does not name one of the five audiences."""


class InvalidStars(ValueError):
    """Raised when a rating's star value is outside 1..5."""


class Audience(Enum):
    """The five reader groups a simplification can target."""

    SCIENTISTS_RESEARCHERS = "scientists_researchers"
    STUDENTS_ACADEMICS = "students_academics"
    INDUSTRY_PROFESSIONALS = "industry_professionals"
    JOURNALISTS_MEDIA = "journalists_media"
    GENERAL_PUBLIC = "general_public"

    @property
    def label(self) -> str:
        """Canonical snake_case wire label."""
        return self.value

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]

    @classmethod
    def default(cls) -> "Audience":
        return cls.GENERAL_PUBLIC


_DISPLAY_NAMES = {
    Audience.SCIENTISTS_RESEARCHERS: "Scientists and Researchers",
    Audience.STUDENTS_ACADEMICS: "Students and Academics",
    Audience.INDUSTRY_PROFESSIONALS: "Industry Professionals",
    Audience.JOURNALISTS_MEDIA: "Journalists and Media Professionals",
    Audience.GENERAL_PUBLIC: "General Public/Non-Experts",
}

# Short forms accepted on the wire and on the CLI, one per audience.
_SHORT_LABELS = {
    "scientists": Audience.SCIENTISTS_RESEARCHERS,
    "students": Audience.STUDENTS_ACADEMICS,
    "industry": Audience.INDUSTRY_PROFESSIONALS,
    "journalists": Audience.JOURNALISTS_MEDIA,
    "general": Audience.GENERAL_PUBLIC,
}


def _label_index() -> dict[str, Audience]:
    index: dict[str, Audience] = {}
    for a in Audience:
        index[a.value] = a
        index[a.display_name.casefold()] = a
    for short, a in _SHORT_LABELS.items():
        index[short] = a
    # Tolerate the display name without the slash-qualified suffix.
    index["general public"] = Audience.GENERAL_PUBLIC
    index["journalists and media"] = Audience.JOURNALISTS_MEDIA
    return index


_LABEL_INDEX = _label_index()


def audience_from_label(label: str) -> Audience:
    """Resolve a canonical label, short form, or display name to an Audience.

    Matching is case-insensitive; anything outside the closed set raises
    UnknownAudience.
    """
    key = label.strip().casefold()
    try:
        return _LABEL_INDEX[key]
    except KeyError:
        raise UnknownAudience(f"unknown audience label: {label!r}") from None


def new_job_id() -> str:
    """Random 128-bit identifier rendered as 32 lowercase hex digits."""
    return secrets.token_hex(16)


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class ModelConfig:
    """Connection settings for an OpenAI-compatible chat-completions endpoint."""

    model_name: str = "gpt-4o"
    api_base: str = "https://api.openai.com/v1"
    api_key: str = ""
    timeout: float = 60.0
    max_retries: int = 3

    def __post_init__(self) -> None:
        if not self.model_name:
            raise ValueError("model_name must be non-empty")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class SimplificationJob:
    """One simplification round trip, keyed by an opaque job id."""

    id: str
    source_text: str
    audience: Audience
    model_name: str
    created_at: datetime

    def __post_init__(self) -> None:
        if not self.source_text.strip():
            raise ValueError("source_text must be non-empty after trimming")

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "source_text": self.source_text,
            "audience": self.audience.label,
            "model_name": self.model_name,
            "created_at": self.created_at.isoformat(),
        }

    @classmethod
    def from_json_dict(cls, d: dict[str, Any]) -> "SimplificationJob":
        return cls(
            id=d["id"],
            source_text=d["source_text"],
            audience=audience_from_label(d["audience"]),
            model_name=d["model_name"],
            created_at=datetime.fromisoformat(d["created_at"]),
        )


@dataclass(frozen=True)
class SimplificationResult:
    """Model output for a job plus readability scores of that output."""

    job_id: str
    simplified_text: str
    fre: float
    fk_grade: float
    latency: float

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "job_id": self.job_id,
            "simplified_text": self.simplified_text,
            "readability": {"fre": self.fre, "fk_grade": self.fk_grade},
            "latency": self.latency,
        }

    @classmethod
    def from_json_dict(cls, d: dict[str, Any]) -> "SimplificationResult":
        return cls(
            job_id=d["job_id"],
            simplified_text=d["simplified_text"],
            fre=d["readability"]["fre"],
            fk_grade=d["readability"]["fk_grade"],
            latency=d["latency"],
        )


@dataclass(frozen=True)
class CorpusPair:
    """An aligned (original, reference simplification) sentence pair."""

    original: str
    reference: str

    def __post_init__(self) -> None:
        if not self.original or not self.reference:
            raise ValueError("corpus pair fields must be non-empty")

    def to_json_dict(self) -> dict[str, Any]:
        return {"original": self.original, "reference": self.reference}

    @classmethod
    def from_json_dict(cls, d: dict[str, Any]) -> "CorpusPair":
        return cls(original=d["original"], reference=d["reference"])


@dataclass(frozen=True)
class MetricReport:
    """Aggregate scores for one audience/model over a corpus."""

    audience: Audience
    model_name: str
    n_pairs: int
    bleu: float
    sari: float
    fk_ease: float
    fk_grade: float

    def __post_init__(self) -> None:
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")
        if not 0.0 <= self.bleu <= 1.0:
            raise ValueError(f"bleu out of range: {self.bleu}")
        if not 0.0 <= self.sari <= 100.0:
            raise ValueError(f"sari out of range: {self.sari}")

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "audience": self.audience.label,
            "model_name": self.model_name,
            "n_pairs": self.n_pairs,
            "bleu": self.bleu,
            "sari": self.sari,
            "fk_ease": self.fk_ease,
            "fk_grade": self.fk_grade,
        }

    @classmethod
    def from_json_dict(cls, d: dict[str, Any]) -> "MetricReport":
        return cls(
            audience=audience_from_label(d["audience"]),
            model_name=d["model_name"],
            n_pairs=d["n_pairs"],
            bleu=d["bleu"],
            sari=d["sari"],
            fk_ease=d["fk_ease"],
            fk_grade=d["fk_grade"],
        )


@dataclass(frozen=True)
class Rating:
    """User feedback on one simplification job."""

    job_id: str
    stars: int
    created_at: datetime
    audience: Audience
    model_name: str
    comment: Optional[str] = None

    MAX_COMMENT_LEN = 2000

    def __post_init__(self) -> None:
        if not isinstance(self.stars, int) or not 1 <= self.stars <= 5:
            raise InvalidStars(f"stars must be an integer in 1..5, got {self.stars!r}")
        if self.comment is not None and len(self.comment) > self.MAX_COMMENT_LEN:
            raise ValueError("comment too long")

    def to_json_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "job_id": self.job_id,
            "stars": self.stars,
            "created_at": self.created_at.isoformat(),
            "audience": self.audience.label,
            "model_name": self.model_name,
        }
        if self.comment is not None:
            d["comment"] = self.comment
        return d

    @classmethod
    def from_json_dict(cls, d: dict[str, Any]) -> "Rating":
        return cls(
            job_id=d["job_id"],
            stars=d["stars"],
            created_at=datetime.fromisoformat(d["created_at"]),
            audience=audience_from_label(d["audience"]),
            model_name=d["model_name"],
            comment=d.get("comment"),
        )
