"""Shared fixtures: the embedded knowledge base, fixture-corpus paths, and a
scripted stand-in for a chat-completion endpoint.

The stub server runs on a loopback port and answers each POST with the next
scripted response, recording request payloads so tests can assert on the
conversation the extractor actually sent.
"""

from __future__ import annotations

import json
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from leasecheck.extraction import LLM, ExtractorConfig
from leasecheck.kb import builtin_kb

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
CASES = FIXTURES / "cases"
EXPECTED_CSV = FIXTURES / "expected.csv"


@pytest.fixture(scope="session")
def kb():
    return builtin_kb()


@pytest.fixture
def david_text():
    return (CASES / "case01.txt").read_text()


@dataclass
class Scripted:
    """One scripted stub response."""

    status: int = 200
    content: str | None = None
    body: dict | None = None
    delay: float = 0.0

    def payload(self) -> bytes:
        if self.body is not None:
            return json.dumps(self.body).encode()
        envelope = {"choices": [{"message": {"role": "assistant", "content": self.content or ""}}]}
        return json.dumps(envelope).encode()


def chat_reply(content: str, delay: float = 0.0) -> Scripted:
    return Scripted(content=content, delay=delay)


def error_reply(status: int, body: dict | None = None) -> Scripted:
    return Scripted(status=status, body=body or {"error": "scripted failure"})


@dataclass
class StubLlm:
    script: deque = field(default_factory=deque)
    requests: list = field(default_factory=list)
    server: ThreadingHTTPServer | None = None

    @property
    def url(self) -> str:
        host, port = self.server.server_address
        return f"http://{host}:{port}/v1/chat/completions"

    def config(self, **overrides) -> ExtractorConfig:
        settings = {"kind": LLM, "endpoint": self.url, "api_key": "stub-key",
                    "model": "stub", "timeout": 5.0, "retry_count": 1}
        settings.update(overrides)
        return ExtractorConfig(**settings)


@pytest.fixture
def stub_llm():
    stub = StubLlm()

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length)
            stub.requests.append({
                "payload": json.loads(raw),
                "auth": self.headers.get("Authorization", ""),
            })
            step = stub.script.popleft() if stub.script else error_reply(500)
            if step.delay:
                time.sleep(step.delay)
            data = step.payload()
            self.send_response(step.status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    stub.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=stub.server.serve_forever, daemon=True)
    thread.start()
    yield stub
    stub.server.shutdown()
    stub.server.server_close()
    thread.join(timeout=5)
