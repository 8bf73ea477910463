"""Durable append-only storage for ratings, plus the job index.

Two JSON-lines logs live in one directory: ``jobs.jsonl`` (every job the
service issued, so UnknownJob validation survives restarts) and
``ratings.jsonl`` (one rating per line, rotated when large). Repeat
ratings for a job are appended as-is; reads apply last-write-wins.
A torn final line (crash mid-append) is ignored on reload.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .core import Audience, InvalidStars, Rating, SimplificationJob

DEFAULT_ROTATE_BYTES = 64 * 1024 * 1024


class UnknownJob(KeyError):
    """Raised when a rating references a job this service never issued."""


class StorageFailure(OSError):
    """Raised when the log cannot be written durably."""


@dataclass(frozen=True)
class FeedbackAggregate:
    count: int
    mean_stars: Optional[float]
    per_audience: dict[str, dict[str, float]]


class FeedbackStore:
    """Single-writer rating log with in-memory read snapshots."""

    def __init__(self, directory: str | Path, rotate_bytes: int = DEFAULT_ROTATE_BYTES):
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._rotate_bytes = rotate_bytes
        self._lock = threading.Lock()
        self._jobs: dict[str, SimplificationJob] = {}
        self._latest: dict[str, Rating] = {}
        self._load()

    # -- paths ----------------------------------------------------------

    @property
    def jobs_path(self) -> Path:
        return self._dir / "jobs.jsonl"

    @property
    def ratings_path(self) -> Path:
        return self._dir / "ratings.jsonl"

    def _rating_logs(self) -> list[Path]:
        rotated = sorted(self._dir.glob("ratings-*.jsonl"))
        return rotated + [self.ratings_path]

    # -- load -----------------------------------------------------------

    def _load(self) -> None:
        for record in _read_jsonl(self.jobs_path):
            try:
                job = SimplificationJob.from_json_dict(record)
            except (KeyError, ValueError):
                continue
            self._jobs[job.id] = job
        for path in self._rating_logs():
            for record in _read_jsonl(path):
                try:
                    rating = Rating.from_json_dict(record)
                except (KeyError, ValueError):
                    continue
                self._latest[rating.job_id] = rating

    # -- jobs -------------------------------------------------------------

    def register_job(self, job: SimplificationJob) -> None:
        with self._lock:
            self._append(self.jobs_path, job.to_json_dict())
            self._jobs[job.id] = job

    def knows_job(self, job_id: str) -> bool:
        return job_id in self._jobs

    def get_job(self, job_id: str) -> Optional[SimplificationJob]:
        return self._jobs.get(job_id)

    # -- ratings ----------------------------------------------------------

    def record_rating(self, rating: Rating) -> None:
        """Append durably; acknowledged only after fsync."""
        if not isinstance(rating.stars, int) or not 1 <= rating.stars <= 5:
            raise InvalidStars(f"stars out of range: {rating.stars!r}")
        if rating.job_id not in self._jobs:
            raise UnknownJob(rating.job_id)
        with self._lock:
            self._maybe_rotate()
            self._append(self.ratings_path, rating.to_json_dict())
            self._latest[rating.job_id] = rating

    def aggregate(self, audience: Optional[Audience] = None) -> FeedbackAggregate:
        """Counts and means over the latest rating per job."""
        with self._lock:
            ratings = list(self._latest.values())
        if audience is not None:
            ratings = [r for r in ratings if r.audience is audience]
        per_audience: dict[str, dict[str, float]] = {}
        for r in ratings:
            bucket = per_audience.setdefault(
                r.audience.label, {"count": 0, "mean_stars": 0.0}
            )
            bucket["count"] += 1
            bucket["mean_stars"] += r.stars
        for bucket in per_audience.values():
            bucket["mean_stars"] = bucket["mean_stars"] / bucket["count"]
        count = len(ratings)
        mean = sum(r.stars for r in ratings) / count if count else None
        return FeedbackAggregate(count=count, mean_stars=mean, per_audience=per_audience)

    # -- internals ---------------------------------------------------------

    def _maybe_rotate(self) -> None:
        try:
            size = self.ratings_path.stat().st_size
        except FileNotFoundError:
            return
        if size < self._rotate_bytes:
            return
        index = len(list(self._dir.glob("ratings-*.jsonl"))) + 1
        self.ratings_path.rename(self._dir / f"ratings-{index:05d}.jsonl")

    @staticmethod
    def _append(path: Path, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False) + "\n"
        try:
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageFailure(f"could not append to {path}: {exc}") from exc


def _read_jsonl(path: Path):
    """Yields decoded records, skipping torn or garbled lines."""
    if not path.exists():
        return
    with open(path, "rb") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line.decode("utf-8"))
            except (json.JSONDecodeError, UnicodeDecodeError):
                continue
            if isinstance(record, dict):
                yield record
