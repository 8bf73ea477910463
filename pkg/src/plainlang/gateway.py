"""Transport to OpenAI-compatible chat-completion endpoints, plus mocks.

The HTTP gateway speaks the standard chat-completions wire format and
retries transient failures (429/5xx/timeouts) with exponential backoff and
full jitter. The mock gateway provides three deterministic offline modes:
``echo_source`` (returns the delimited payload verbatim), ``title_case``,
and ``scripted`` (replays a JSONL transcript keyed by user-message hash).
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import re
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import httpx

from .core import ModelConfig
from .prompting import PromptBundle, extract_source


class GatewayError(Exception):
    """Base class for all gateway failures."""


class AuthFailed(GatewayError):
    """Upstream rejected the credentials (401/403). Never retried."""


class RateLimited(GatewayError):
    """429 persisted after all retries."""


class UpstreamError(GatewayError):
    """Upstream 5xx persisted after all retries, or a non-retryable 4xx."""


class GatewayTimeout(GatewayError):
    """Request timed out after all retries."""


class MalformedResponse(GatewayError):
    """Upstream replied 2xx but the body was not a chat completion."""


class ScriptMiss(GatewayError):
    """Scripted mock has no entry for this user message."""


@dataclass(frozen=True)
class CompletionRequest:
    bundle: PromptBundle
    model: ModelConfig


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int
    latency: float
    attempts: int = 1


DEFAULT_API_BASE = "https://api.openai.com/v1"
DEFAULT_MAX_IN_FLIGHT = 4

MOCK_MODES = ("echo_source", "title_case", "scripted")


def model_config_from_env(env: Optional[dict] = None) -> ModelConfig:
    """Build a ModelConfig from LLM_API_BASE / LLM_API_KEY / LLM_MODEL."""
    e = os.environ if env is None else env
    return ModelConfig(
        model_name=e.get("LLM_MODEL") or "gpt-4o",
        api_base=e.get("LLM_API_BASE") or DEFAULT_API_BASE,
        api_key=e.get("LLM_API_KEY") or "",
    )


def _estimate_tokens(text: str) -> int:
    return len(text.split())


class HttpGateway:
    """Synchronous chat-completions client with retries and a flight cap.

    Safe to share across threads: retry state is per call, and the
    in-flight cap is a semaphore.
    """

    def __init__(
        self,
        max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
        backoff_base: float = 1.0,
        sleep: Callable[[float], None] = time.sleep,
        rng: Optional[random.Random] = None,
        client: Optional[httpx.Client] = None,
    ) -> None:
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        self._flight_cap = threading.Semaphore(max_in_flight)
        self._backoff_base = backoff_base
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._client = client or httpx.Client()

    def close(self) -> None:
        self._client.close()

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        with self._flight_cap:
            return self._complete_with_retries(request)

    def _complete_with_retries(self, request: CompletionRequest) -> CompletionResponse:
        cfg = request.model
        bundle = request.bundle
        url = cfg.api_base.rstrip("/") + "/chat/completions"
        payload = {
            "model": cfg.model_name,
            "messages": [
                {"role": "system", "content": bundle.system_message},
                {"role": "user", "content": bundle.user_message},
            ],
            "temperature": bundle.temperature,
            "max_tokens": bundle.max_output_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if cfg.api_key:
            headers["Authorization"] = f"Bearer {cfg.api_key}"

        started = time.perf_counter()
        attempts = 0
        last_status: Optional[int] = None
        for attempt in range(cfg.max_retries + 1):
            attempts = attempt + 1
            try:
                response = self._client.post(
                    url, json=payload, headers=headers, timeout=cfg.timeout
                )
            except httpx.TimeoutException as exc:
                if attempt == cfg.max_retries:
                    raise GatewayTimeout(f"timed out after {attempts} attempts") from exc
                self._backoff(attempt)
                continue
            except httpx.HTTPError as exc:
                # Connection-level failures are treated as transient.
                if attempt == cfg.max_retries:
                    raise UpstreamError(f"transport failure: {exc}") from exc
                self._backoff(attempt)
                continue

            status = response.status_code
            last_status = status
            if status in (401, 403):
                raise AuthFailed(f"upstream returned {status}")
            if status == 429 or 500 <= status < 600:
                if attempt == cfg.max_retries:
                    break
                self._backoff(attempt)
                continue
            if not 200 <= status < 300:
                raise UpstreamError(f"unexpected status {status}")
            latency = time.perf_counter() - started
            return self._parse_completion(response, latency, attempts)

        if last_status == 429:
            raise RateLimited(f"rate limited after {attempts} attempts")
        raise UpstreamError(f"upstream returned {last_status} after {attempts} attempts")

    def _backoff(self, attempt: int) -> None:
        # Full jitter: uniform in [0, base * 2^attempt].
        self._sleep(self._rng.uniform(0.0, self._backoff_base * (2.0 ** attempt)))

    @staticmethod
    def _parse_completion(response: httpx.Response, latency: float, attempts: int) -> CompletionResponse:
        try:
            body = response.json()
        except ValueError as exc:
            raise MalformedResponse("response body is not JSON") from exc
        try:
            choice = body["choices"][0]
            text = choice["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"unexpected completion shape: {exc}") from exc
        if text is None:
            text = ""
        if not isinstance(text, str):
            raise MalformedResponse("completion content is not a string")
        usage = body.get("usage") or {}
        return CompletionResponse(
            text=text,
            prompt_tokens=int(usage.get("prompt_tokens", 0)),
            completion_tokens=int(usage.get("completion_tokens", 0)),
            latency=latency,
            attempts=attempts,
        )


def transcript_key(user_message: str) -> str:
    """Stable lookup key for scripted transcripts."""
    return hashlib.sha256(user_message.encode("utf-8")).hexdigest()


def append_transcript_entry(path: str | Path, user_message: str, response_text: str) -> None:
    """Record one scripted exchange (JSON-lines, one object per line)."""
    entry = {"key": transcript_key(user_message), "response": response_text}
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(entry, ensure_ascii=False) + "\n")


class MockGateway:
    """Deterministic offline backend with the same complete() surface."""

    def __init__(self, mode: str, transcript_path: Optional[str | Path] = None) -> None:
        if mode not in MOCK_MODES:
            raise ValueError(f"unknown mock mode: {mode!r}")
        self.mode = mode
        self._script: dict[str, str] = {}
        if mode == "scripted":
            if transcript_path is None:
                raise ValueError("scripted mode needs a transcript path")
            self._script = self._load_transcript(transcript_path)

    @staticmethod
    def _load_transcript(path: str | Path) -> dict[str, str]:
        script: dict[str, str] = {}
        p = Path(path)
        if not p.exists():
            return script
        with open(p, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                script[entry["key"]] = entry["response"]
        return script

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        started = time.perf_counter()
        user_message = request.bundle.user_message
        if self.mode == "echo_source":
            text = extract_source(user_message)
        elif self.mode == "title_case":
            source = extract_source(user_message)
            text = _title_case(source)
        else:
            key = transcript_key(user_message)
            if key not in self._script:
                raise ScriptMiss(f"no scripted response for key {key[:12]}…")
            text = self._script[key]
        return CompletionResponse(
            text=text,
            prompt_tokens=_estimate_tokens(user_message),
            completion_tokens=_estimate_tokens(text),
            latency=time.perf_counter() - started,
        )


def _title_case(text: str) -> str:
    return re.sub(r"\S+", lambda m: m.group(0)[:1].upper() + m.group(0)[1:], text)
