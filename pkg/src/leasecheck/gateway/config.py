"""Runtime configuration for the CLI and HTTP service."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from leasecheck.dsl import load_kb_file
from leasecheck.dsl.model import KnowledgeBase
from leasecheck.extraction import ExtractorConfig
from leasecheck.kb import builtin_kb


def default_store_dir() -> Path:
    return Path.home() / ".leasecheck" / "sessions"


@dataclass(frozen=True)
class AppConfig:
    """Where the KB comes from, how to extract, and how to serve.

    kb_path None means the embedded New York knowledge base.
    """

    kb_path: str | None = None
    extractor: ExtractorConfig = field(default_factory=ExtractorConfig)
    host: str = "127.0.0.1"
    port: int = 8000
    store_dir: Path = field(default_factory=default_store_dir)
    frontend_dir: str | None = None
    log_level: str = "info"


def load_configured_kb(config: AppConfig) -> KnowledgeBase:
    """The builtin KB, or the file named by kb_path (validated)."""
    if config.kb_path is None:
        return builtin_kb()
    return load_kb_file(config.kb_path)
