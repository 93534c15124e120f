"""Durable interview session store: one JSON file per session.

Writes go through a temporary file and os.replace, so a session file is
always either the old or the new version. A per-session lock serializes
operations on one session while distinct sessions proceed concurrently.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Callable, Iterator

from leasecheck.engine import CaseFacts, Firing, Verdict
from leasecheck.dsl.model import Law
from leasecheck.errors import UnknownSessionError
from leasecheck.interview import InterviewSession

_ID_ALPHABET = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_"
)


def verdict_to_dict(verdict: Verdict) -> dict:
    return {
        "outcome": verdict.outcome,
        "message": verdict.message,
        "citations": [
            {"id": law.id, "group": law.group, "text": law.text, "source": law.source}
            for law in verdict.citations
        ],
        "trace": [
            {
                "rule_id": firing.rule_id,
                "head": firing.head,
                "body": [[literal, status] for literal, status in firing.body],
            }
            for firing in verdict.trace
        ],
        "missing_attributes": list(verdict.missing_attributes),
    }


def verdict_from_dict(data: dict) -> Verdict:
    return Verdict(
        outcome=data["outcome"],
        message=data["message"],
        citations=tuple(
            Law(law["id"], law["group"], law["text"], law["source"])
            for law in data["citations"]
        ),
        trace=tuple(
            Firing(
                firing["rule_id"],
                firing["head"],
                tuple((literal, status) for literal, status in firing["body"]),
            )
            for firing in data["trace"]
        ),
        missing_attributes=tuple(data["missing_attributes"]),
    )


def session_to_dict(session: InterviewSession) -> dict:
    return {
        "id": session.id,
        "claim_type": session.claim_type,
        "values": dict(session.facts.values),
        "state": session.state,
        "created_at": session.created_at,
        "verdict": None if session.verdict is None else verdict_to_dict(session.verdict),
        "warnings": list(session.warnings),
    }


def session_from_dict(data: dict) -> InterviewSession:
    return InterviewSession(
        id=data["id"],
        claim_type=data["claim_type"],
        facts=CaseFacts(data["claim_type"], dict(data["values"])),
        state=data["state"],
        created_at=data["created_at"],
        verdict=None if data["verdict"] is None else verdict_from_dict(data["verdict"]),
        warnings=tuple(data["warnings"]),
    )


class SessionStore:
    """File-backed session persistence with per-session locking."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            lock = self._locks.get(session_id)
            if lock is None:
                lock = threading.Lock()
                self._locks[session_id] = lock
            return lock

    def _path(self, session_id: str) -> Path:
        # ids come from secrets.token_urlsafe; reject anything that
        # could escape the store directory or overrun a filename
        if (
            not session_id
            or len(session_id) > 128
            or not set(session_id) <= _ID_ALPHABET
        ):
            raise UnknownSessionError(f"no session {session_id!r}")
        return self.directory / f"{session_id}.json"

    def save(self, session: InterviewSession) -> None:
        with self._lock_for(session.id):
            self._write(session)

    def _write(self, session: InterviewSession) -> None:
        path = self._path(session.id)
        payload = json.dumps(session_to_dict(session), indent=2)
        fd, tmp_name = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload)
            os.replace(tmp_name, path)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise

    def load(self, session_id: str) -> InterviewSession:
        path = self._path(session_id)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise UnknownSessionError(f"no session {session_id!r}") from None
        return session_from_dict(data)

    def mutate(
        self,
        session_id: str,
        operation: Callable[[InterviewSession], InterviewSession],
    ) -> InterviewSession:
        """Load, transform, and persist one session under its lock."""
        with self._lock_for(session_id):
            session = self.load(session_id)
            updated = operation(session)
            self._write(updated)
            return updated

    def ids(self) -> Iterator[str]:
        for path in sorted(self.directory.glob("*.json")):
            yield path.stem
