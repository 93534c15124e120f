"""Rule language: parsing, validation, and canonical printing of .llkb
knowledge base files."""

from __future__ import annotations

from pathlib import Path

from leasecheck.dsl.model import KbAst, KnowledgeBase
from leasecheck.dsl.parser import parse_kb
from leasecheck.dsl.printer import print_kb
from leasecheck.dsl.validate import validate_kb

__all__ = [
    "KbAst",
    "KnowledgeBase",
    "parse_kb",
    "print_kb",
    "validate_kb",
    "load_kb",
    "load_kb_file",
]


def load_kb(text: str) -> KnowledgeBase:
    """Parse and validate knowledge base source text."""
    return validate_kb(parse_kb(text))


def load_kb_file(path: str | Path) -> KnowledgeBase:
    """Parse and validate a .llkb file."""
    return load_kb(Path(path).read_text(encoding="utf-8"))
