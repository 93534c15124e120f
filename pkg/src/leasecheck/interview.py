"""Guided question flow over a claim schema.

A session accumulates attribute answers until the case facts are
complete, then hands them to the engine exactly once. Sessions are
immutable values; operations return updated copies so a store can
persist each step atomically.
"""

from __future__ import annotations

import secrets
import time
from dataclasses import dataclass, replace

from leasecheck.dsl.model import KnowledgeBase
from leasecheck.engine import (
    UNKNOWN,
    CaseFacts,
    Verdict,
    analyze,
    make_case_facts,
)
from leasecheck.errors import (
    AlreadyAnsweredError,
    ExtractorError,
    IncompleteSessionError,
    OutOfDomainError,
    UnknownAttributeError,
)
from leasecheck.extraction import ExtractorConfig, extract

COLLECTING = "collecting"
COMPLETE = "complete"
ANALYZED = "analyzed"


@dataclass(frozen=True)
class Question:
    """One pending question: the attribute, its prompt, and the answer
    options (the schema enumeration)."""

    attribute: str
    prompt: str
    options: tuple[str, ...]
    allows_unknown: bool = False


@dataclass(frozen=True)
class InterviewSession:
    """One interview in progress; state is derived from the facts."""

    id: str
    claim_type: str
    facts: CaseFacts
    state: str
    created_at: float
    verdict: Verdict | None = None
    warnings: tuple[str, ...] = ()

    @property
    def answered(self) -> dict[str, str]:
        return {k: v for k, v in self.facts.values.items() if v != UNKNOWN}

    @property
    def pending(self) -> tuple[str, ...]:
        return self.facts.missing


def _state_for(facts: CaseFacts) -> str:
    return COMPLETE if facts.complete else COLLECTING


def start_interview(
    kb: KnowledgeBase,
    claim_type: str,
    case_text: str | None = None,
    extractor: ExtractorConfig | None = None,
) -> InterviewSession:
    """Open a session, pre-filling facts from case_text when given.
    Extraction failures do not block the interview: the session starts
    with nothing pre-filled and the failure recorded as a warning."""
    schema = kb.claim(claim_type)
    warnings: tuple[str, ...] = ()
    facts = make_case_facts(schema, {})
    if case_text is not None and case_text.strip():
        try:
            result = extract(case_text, schema, extractor)
            facts = result.normalized
            warnings = result.warnings
        except ExtractorError as err:
            warnings = (f"extraction failed, starting blank: {err}",)
    return InterviewSession(
        id=secrets.token_urlsafe(16),
        claim_type=claim_type,
        facts=facts,
        state=_state_for(facts),
        created_at=time.time(),
        warnings=warnings,
    )


def next_question(kb: KnowledgeBase, session: InterviewSession) -> Question | None:
    """The first unanswered attribute in schema order, or None when the
    facts are complete."""
    schema = kb.claim(session.claim_type)
    for attr in schema.attributes:
        if session.facts.values.get(attr.name, UNKNOWN) == UNKNOWN:
            return Question(attr.name, attr.question, attr.domain)
    return None


def submit_answer(
    kb: KnowledgeBase,
    session: InterviewSession,
    attribute: str,
    value: str,
    revise: bool = False,
) -> InterviewSession:
    """Record one answer. Overwriting a previous answer requires the
    revise flag; revising an analyzed session discards its verdict."""
    schema = kb.claim(session.claim_type)
    spec = schema.attribute(attribute)
    if spec is None:
        raise UnknownAttributeError(
            f"{attribute!r} is not an attribute of claim {session.claim_type!r}"
        )
    if value == UNKNOWN:
        raise OutOfDomainError(
            f"{attribute} does not accept {UNKNOWN!r} as an answer; "
            f"choose one of {', '.join(spec.domain)}"
        )
    if value not in spec.domain:
        raise OutOfDomainError(
            f"{attribute} must be one of {', '.join(spec.domain)}; got {value!r}"
        )
    if session.facts.values.get(attribute, UNKNOWN) != UNKNOWN and not revise:
        raise AlreadyAnsweredError(
            f"{attribute} is already answered; pass revise to change it"
        )
    values = dict(session.facts.values)
    values[attribute] = value
    facts = make_case_facts(schema, values)
    return replace(
        session,
        facts=facts,
        state=_state_for(facts),
        verdict=None,
    )


def finalize(
    kb: KnowledgeBase, session: InterviewSession
) -> tuple[InterviewSession, Verdict]:
    """Analyze a complete session. Idempotent: an analyzed session
    returns its stored verdict unchanged."""
    if session.state == ANALYZED and session.verdict is not None:
        return session, session.verdict
    if not session.facts.complete:
        missing = session.facts.missing
        raise IncompleteSessionError(
            "cannot finalize; unanswered: " + ", ".join(missing), missing
        )
    verdict = analyze(kb, session.facts)
    updated = replace(session, state=ANALYZED, verdict=verdict)
    return updated, verdict
