"""HTTP gateway: JSON API over analysis, interviews, laws, and health.

Error responses are uniform {code, message} bodies; the knowledge base
is loaded once and shared read-only across requests.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from leasecheck import errors
from leasecheck import interview as interviews
from leasecheck.dsl import print_kb
from leasecheck.dsl.model import KnowledgeBase
from leasecheck.engine import analyze, explain
from leasecheck.extraction import LLM, PATTERN, ExtractorConfig, extract
from leasecheck.gateway.config import AppConfig, load_configured_kb
from leasecheck.gateway.store import SessionStore, verdict_to_dict
from leasecheck.kb import list_laws

_ERROR_STATUS: tuple[tuple[type, int, str], ...] = (
    (errors.UnknownClaimError, 404, "unknown_claim"),
    (errors.UnknownSessionError, 404, "unknown_session"),
    (errors.UnknownAttributeError, 400, "unknown_attribute"),
    (errors.OutOfDomainError, 400, "out_of_domain"),
    (errors.AlreadyAnsweredError, 409, "already_answered"),
    (errors.IncompleteSessionError, 409, "incomplete_session"),
    (errors.CredentialError, 401, "credential"),
    (errors.ExtractionTimeoutError, 502, "extraction_timeout"),
    (errors.ExtractionTransportError, 502, "extraction_transport"),
    (errors.MalformedReplyError, 502, "malformed_reply"),
    (errors.CaseTooLongError, 413, "case_too_long"),
    (errors.ExtractorConfigError, 400, "extractor_config"),
    (errors.KbSourceError, 500, "invalid_kb"),
)


class AnalyzeRequest(BaseModel):
    claim_type: str
    case_text: str
    extractor: str | None = None


class StartRequest(BaseModel):
    claim_type: str
    case_text: str | None = None
    extractor: str | None = None


class AnswerRequest(BaseModel):
    attribute: str
    value: str
    revise: bool = False


def kb_fingerprint(kb: KnowledgeBase) -> str:
    """Content hash of the canonical KB text."""
    return hashlib.sha256(print_kb(kb).encode("utf-8")).hexdigest()


def _question_view(question: interviews.Question | None) -> dict | None:
    if question is None:
        return None
    return {
        "attribute": question.attribute,
        "prompt": question.prompt,
        "options": list(question.options),
        "allows_unknown": question.allows_unknown,
    }


def _verdict_view(verdict) -> dict:
    view = verdict_to_dict(verdict)
    view["explanation"] = explain(verdict)
    return view


def create_app(config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    kb = load_configured_kb(config)
    store = SessionStore(config.store_dir)
    fingerprint = kb_fingerprint(kb)
    app = FastAPI(title="leasecheck", docs_url=None, redoc_url=None)

    @app.exception_handler(errors.LeasecheckError)
    async def leasecheck_error(_request: Request, exc: errors.LeasecheckError):
        for kind, status, code in _ERROR_STATUS:
            if isinstance(exc, kind):
                return JSONResponse(
                    status_code=status, content={"code": code, "message": str(exc)}
                )
        return JSONResponse(
            status_code=500, content={"code": "internal", "message": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def invalid_request(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422, content={"code": "invalid_request", "message": str(exc)}
        )

    def extractor_for(kind: str | None) -> ExtractorConfig:
        if kind is None:
            return config.extractor
        if kind not in (PATTERN, LLM):
            raise errors.ExtractorConfigError(
                f"extractor must be {PATTERN!r} or {LLM!r}; got {kind!r}"
            )
        if kind == config.extractor.kind:
            return config.extractor
        if kind == LLM:
            return replace(ExtractorConfig.from_env(LLM), model=config.extractor.model)
        return replace(config.extractor, kind=PATTERN)

    def session_view(session: interviews.InterviewSession) -> dict:
        return {
            "session_id": session.id,
            "claim_type": session.claim_type,
            "state": session.state,
            "answered": session.answered,
            "pending": list(session.pending),
            "question": _question_view(interviews.next_question(kb, session)),
            "warnings": list(session.warnings),
        }

    @app.get("/api/health")
    def health() -> dict:
        return {
            "status": "ok",
            "kb_fingerprint": fingerprint,
            "laws": {c: len(kb.laws_for_claim(c)) for c in kb.claim_types},
        }

    @app.get("/api/claims")
    def claims() -> dict:
        return {
            "claims": [
                {
                    "claim_type": schema.claim_type,
                    "attributes": [
                        {
                            "name": attr.name,
                            "options": list(attr.domain),
                            "question": attr.question,
                        }
                        for attr in schema.attributes
                    ],
                    "law_count": len(kb.laws_for_claim(schema.claim_type)),
                }
                for schema in kb.claims
            ]
        }

    @app.get("/api/laws/{claim_type}")
    def laws(claim_type: str) -> dict:
        found = list_laws(kb, claim_type)
        return {
            "claim_type": claim_type,
            "laws": [
                {"id": law.id, "group": law.group, "text": law.text, "source": law.source}
                for law in found
            ],
        }

    @app.post("/api/analyze")
    def analyze_case(request: AnalyzeRequest) -> dict:
        schema = kb.claim(request.claim_type)
        extractor = extractor_for(request.extractor)
        started = time.perf_counter()
        result = extract(request.case_text, schema, extractor)
        extracted = time.perf_counter()
        verdict = analyze(kb, result.normalized)
        analyzed = time.perf_counter()
        view = _verdict_view(verdict)
        view["extraction"] = {
            "raw_pairs": dict(result.raw_pairs),
            "provenance": result.provenance,
            "warnings": list(result.warnings),
            "audit": result.audit,
        }
        view["timing"] = {
            "extraction_ms": (extracted - started) * 1000.0,
            "engine_ms": (analyzed - extracted) * 1000.0,
        }
        return view

    @app.post("/api/interview/start")
    def interview_start(request: StartRequest) -> dict:
        extractor = extractor_for(request.extractor)
        session = interviews.start_interview(
            kb, request.claim_type, request.case_text, extractor
        )
        store.save(session)
        return session_view(session)

    @app.get("/api/interview/{session_id}/next")
    def interview_next(session_id: str) -> dict:
        session = store.load(session_id)
        question = interviews.next_question(kb, session)
        return {
            "state": session.state,
            "complete": question is None,
            "question": _question_view(question),
        }

    @app.post("/api/interview/{session_id}/answer")
    def interview_answer(session_id: str, request: AnswerRequest) -> dict:
        updated = store.mutate(
            session_id,
            lambda session: interviews.submit_answer(
                kb, session, request.attribute, request.value, request.revise
            ),
        )
        return session_view(updated)

    @app.post("/api/interview/{session_id}/finalize")
    def interview_finalize(session_id: str) -> dict:
        def run(session: interviews.InterviewSession) -> interviews.InterviewSession:
            updated, _ = interviews.finalize(kb, session)
            return updated

        updated = store.mutate(session_id, run)
        assert updated.verdict is not None
        return {
            "session_id": updated.id,
            "state": updated.state,
            "verdict": _verdict_view(updated.verdict),
        }

    if config.frontend_dir and Path(config.frontend_dir).is_dir():
        app.mount(
            "/", StaticFiles(directory=config.frontend_dir, html=True), name="ui"
        )

    return app
