"""The HTTP API: simplify, upload, expert mode, feedback, health.

All request/response bodies are JSON (snake_case) except the multipart
upload. Errors use one schema everywhere: ``{code, message, http_status}``
with ``code`` drawn from :data:`ERROR_CODES`. Handlers are synchronous and
run in the framework's thread pool; shared state is limited to the
feedback store (single writer) and the gateway (thread-safe).
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, File, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import gateway as gw
from . import metrics
from .analysis import split_sentences
from .core import (
    Audience,
    InvalidStars,
    ModelConfig,
    Rating,
    SimplificationJob,
    UnknownAudience,
    audience_from_label,
    new_job_id,
    utc_now,
)
from .feedback import FeedbackStore, UnknownJob
from .ingestion import (
    CorruptArchive,
    CorruptPdf,
    CorruptXml,
    EncryptedPdf,
    NoTextContent,
    UnsupportedFormat,
    extract_text,
)
from .prompting import (
    ComplexityLevel,
    EmptyText,
    PromptBundle,
    WordNotInContext,
    build_definition_prompt,
    build_rephrase_prompt,
    build_simplify_prompt,
    build_synonym_prompt,
)

logger = logging.getLogger("plainlang.service")

MAX_TEXT_CHARS = 50_000
MAX_UPLOAD_BYTES = 10 * 1024 * 1024
MAX_SYNONYMS = 5

REPROMPT_SUFFIX = (
    "\n\nYour previous reply was not valid JSON. Reply with only the requested JSON."
)

# The complete set of machine-readable error codes this API can return.
ERROR_CODES = frozenset(
    {
        "empty_text",
        "too_long",
        "unknown_audience",
        "invalid_level",
        "word_not_in_context",
        "malformed_model_output",
        "unsupported_format",
        "corrupt_file",
        "too_large",
        "no_text_content",
        "encrypted_pdf",
        "unknown_job",
        "invalid_stars",
        "invalid_request",
        "upstream_error",
        "timeout",
        "internal_error",
    }
)


class ApiError(Exception):
    """An error with a wire representation: code, message, HTTP status."""

    def __init__(self, code: str, message: str, http_status: int):
        assert code in ERROR_CODES, f"undocumented error code {code}"
        super().__init__(message)
        self.code = code
        self.message = message
        self.http_status = http_status

    def to_response(self) -> JSONResponse:
        return JSONResponse(
            status_code=self.http_status,
            content={
                "code": self.code,
                "message": self.message,
                "http_status": self.http_status,
            },
        )


@dataclass
class ServiceSettings:
    model: ModelConfig
    feedback_path: Path
    mock_mode: str = "off"  # off | echo_source | title_case | scripted
    transcript_path: Optional[Path] = None
    ui_origin: Optional[str] = None
    max_in_flight: int = gw.DEFAULT_MAX_IN_FLIGHT

    @classmethod
    def from_env(cls, env: Optional[dict] = None) -> "ServiceSettings":
        e = os.environ if env is None else env
        transcript = e.get("MOCK_TRANSCRIPT")
        return cls(
            model=gw.model_config_from_env(e),
            feedback_path=Path(e.get("FEEDBACK_PATH") or "./feedback"),
            mock_mode=e.get("MOCK_MODE") or "off",
            transcript_path=Path(transcript) if transcript else None,
            ui_origin=e.get("UI_ORIGIN") or None,
        )


def _build_gateway(settings: ServiceSettings):
    if settings.mock_mode == "off":
        return gw.HttpGateway(max_in_flight=settings.max_in_flight)
    return gw.MockGateway(settings.mock_mode, transcript_path=settings.transcript_path)


class SimplifyBody(BaseModel):
    text: str = ""
    audience: Optional[str] = None
    model: Optional[str] = None


class RephraseBody(BaseModel):
    sentence: str = ""
    level: Optional[int] = None


class WordBody(BaseModel):
    word: str = ""
    sentence: str = ""


class FeedbackBody(BaseModel):
    job_id: str = ""
    stars: Optional[int] = None
    comment: Optional[str] = None


def create_app(settings: ServiceSettings) -> FastAPI:
    app = FastAPI(title="plainlang", docs_url=None, redoc_url=None)
    store = FeedbackStore(settings.feedback_path)
    backend = _build_gateway(settings)
    app.state.settings = settings
    app.state.store = store
    app.state.gateway = backend

    if settings.ui_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[settings.ui_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return exc.to_response()

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return ApiError("invalid_request", "request body failed validation", 400).to_response()

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception):
        logger.exception("unhandled error on %s %s", request.method, request.url.path)
        return ApiError("internal_error", "internal server error", 500).to_response()

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        # Bodies are deliberately not logged: user text stays private.
        response = await call_next(request)
        logger.info("%s %s -> %s", request.method, request.url.path, response.status_code)
        return response

    # -- completion plumbing -------------------------------------------

    def run_completion(bundle: PromptBundle, model_name: Optional[str]) -> gw.CompletionResponse:
        cfg = settings.model
        if model_name:
            cfg = replace(cfg, model_name=model_name)
        request = gw.CompletionRequest(bundle=bundle, model=cfg)
        try:
            return backend.complete(request)
        except gw.GatewayTimeout as exc:
            raise ApiError("timeout", f"model call timed out: {exc}", 504) from exc
        except gw.GatewayError as exc:
            raise ApiError("upstream_error", f"model call failed: {exc}", 502) from exc

    def completion_json(bundle: PromptBundle, model_name: Optional[str]):
        """Run a completion that must return JSON; reprompt once on failure."""
        first = run_completion(bundle, model_name)
        try:
            return json.loads(first.text)
        except json.JSONDecodeError:
            pass
        retry_bundle = replace(bundle, user_message=bundle.user_message + REPROMPT_SUFFIX)
        second = run_completion(retry_bundle, model_name)
        try:
            return json.loads(second.text)
        except json.JSONDecodeError as exc:
            raise ApiError(
                "malformed_model_output",
                "model did not return valid JSON after one retry",
                502,
            ) from exc

    # -- endpoints -------------------------------------------------------

    @app.post("/api/simplify")
    def simplify(body: SimplifyBody):
        text = body.text
        if not text.strip():
            raise ApiError("empty_text", "text must be non-empty", 400)
        if len(text) > MAX_TEXT_CHARS:
            raise ApiError(
                "too_long", f"text exceeds {MAX_TEXT_CHARS} characters", 400
            )
        if body.audience is None:
            audience = Audience.default()
        else:
            try:
                audience = audience_from_label(body.audience)
            except UnknownAudience as exc:
                raise ApiError("unknown_audience", str(exc), 400) from exc

        bundle = build_simplify_prompt(text, audience)
        completion = run_completion(bundle, body.model)
        simplified = completion.text
        if not simplified.strip():
            raise ApiError("upstream_error", "model returned an empty completion", 502)
        try:
            fre = metrics.flesch_reading_ease(simplified)
            fkg = metrics.fk_grade(simplified)
        except metrics.NoWords as exc:
            raise ApiError(
                "upstream_error", "model output contains no readable words", 502
            ) from exc

        model_name = body.model or settings.model.model_name
        job = SimplificationJob(
            id=new_job_id(),
            source_text=text,
            audience=audience,
            model_name=model_name,
            created_at=utc_now(),
        )
        store.register_job(job)
        return {
            "job_id": job.id,
            "simplified_text": simplified,
            "audience": audience.label,
            "model": model_name,
            "readability": {"fre": fre, "fk_grade": fkg},
        }

    @app.post("/api/upload")
    def upload(file: UploadFile = File(...)):
        data = file.file.read(MAX_UPLOAD_BYTES + 1)
        if len(data) > MAX_UPLOAD_BYTES:
            raise ApiError("too_large", "file exceeds the 10 MiB upload limit", 413)
        try:
            document = extract_text(data, declared_name=file.filename or "")
        except UnsupportedFormat as exc:
            raise ApiError("unsupported_format", str(exc), 400) from exc
        except (CorruptArchive, CorruptXml, CorruptPdf) as exc:
            raise ApiError("corrupt_file", str(exc), 400) from exc
        except NoTextContent as exc:
            raise ApiError("no_text_content", str(exc), 422) from exc
        except EncryptedPdf as exc:
            raise ApiError("encrypted_pdf", str(exc), 422) from exc
        return {
            "text": document.text,
            "format": document.format,
            "warnings": list(document.warnings),
        }

    @app.post("/api/expert/rephrase")
    def rephrase(body: RephraseBody):
        if not body.sentence.strip():
            raise ApiError("empty_text", "sentence must be non-empty", 400)
        if body.level not in (1, 2, 3):
            raise ApiError("invalid_level", "level must be 1, 2, or 3", 400)
        bundle = build_rephrase_prompt(body.sentence, ComplexityLevel(body.level))
        completion = run_completion(bundle, None)
        return {"variant": completion.text.strip()}

    def _word_bundle(body: WordBody, builder):
        try:
            return builder(body.word, body.sentence)
        except EmptyText as exc:
            raise ApiError("empty_text", str(exc), 400) from exc
        except WordNotInContext as exc:
            raise ApiError("word_not_in_context", str(exc), 400) from exc

    @app.post("/api/expert/synonyms")
    def synonyms(body: WordBody):
        bundle = _word_bundle(body, build_synonym_prompt)
        parsed = completion_json(bundle, None)
        if not isinstance(parsed, list) or not all(isinstance(s, str) for s in parsed):
            raise ApiError(
                "malformed_model_output", "expected a JSON array of strings", 502
            )
        return {"synonyms": parsed[:MAX_SYNONYMS]}

    @app.post("/api/expert/definition")
    def definition(body: WordBody):
        bundle = _word_bundle(body, build_definition_prompt)
        parsed = completion_json(bundle, None)
        if not isinstance(parsed, dict) or not isinstance(parsed.get("definition"), str):
            raise ApiError(
                "malformed_model_output", 'expected a JSON object {"definition": ...}', 502
            )
        return {"definition": parsed["definition"]}

    @app.post("/api/feedback", status_code=204)
    def feedback(body: FeedbackBody):
        if not store.knows_job(body.job_id):
            raise ApiError("unknown_job", f"unknown job id {body.job_id!r}", 404)
        job = store.get_job(body.job_id)
        try:
            rating = Rating(
                job_id=body.job_id,
                stars=body.stars if body.stars is not None else -1,
                created_at=utc_now(),
                audience=job.audience,
                model_name=job.model_name,
                comment=body.comment,
            )
            store.record_rating(rating)
        except InvalidStars as exc:
            raise ApiError("invalid_stars", str(exc), 400) from exc
        except UnknownJob as exc:
            raise ApiError("unknown_job", str(exc), 404) from exc
        except ValueError as exc:
            raise ApiError("invalid_request", str(exc), 400) from exc
        return Response(status_code=204)

    @app.get("/api/feedback/aggregate")
    def feedback_aggregate(audience: Optional[str] = None):
        selected = None
        if audience:
            try:
                selected = audience_from_label(audience)
            except UnknownAudience as exc:
                raise ApiError("unknown_audience", str(exc), 400) from exc
        agg = store.aggregate(selected)
        return {
            "count": agg.count,
            "mean_stars": agg.mean_stars,
            "per_audience": agg.per_audience,
        }

    @app.get("/api/health")
    def health():
        return {"status": "ok", "model": settings.model.model_name}

    @app.get("/api/split")
    def split(text: str = ""):
        return {"sentences": split_sentences(text)}

    @app.get("/api/audiences")
    def audiences():
        return {
            "audiences": [
                {"label": a.label, "display_name": a.display_name} for a in Audience
            ],
            "default": Audience.default().label,
        }

    return app


def app_from_env() -> FastAPI:
    """Entry point for `uvicorn plainlang.service:app_from_env --factory`."""
    return create_app(ServiceSettings.from_env())
