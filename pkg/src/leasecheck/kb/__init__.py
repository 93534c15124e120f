"""The embedded New York tenancy knowledge base and helpers to query
its claim schemas and law groups."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from leasecheck.dsl import load_kb
from leasecheck.dsl.model import AttributeSpec, KnowledgeBase, Law

BUILTIN_KB_FILENAME = "newyork.llkb"


def builtin_kb_text() -> str:
    """The canonical .llkb source shipped with the package."""
    return (
        resources.files(__package__)
        .joinpath(BUILTIN_KB_FILENAME)
        .read_text(encoding="utf-8")
    )


@lru_cache(maxsize=1)
def builtin_kb() -> KnowledgeBase:
    """Parse and validate the embedded knowledge base once per process."""
    return load_kb(builtin_kb_text())


def required_attributes(kb: KnowledgeBase, claim_type: str) -> tuple[AttributeSpec, ...]:
    """The claim's attributes in declaration order, with domains and
    question texts. Raises UnknownClaimError for unknown claim types."""
    return kb.claim(claim_type).attributes


def list_laws(kb: KnowledgeBase, claim_type: str) -> tuple[Law, ...]:
    """The claim's law group in declaration order. Raises
    UnknownClaimError for unknown claim types."""
    kb.claim(claim_type)
    return kb.laws_for_claim(claim_type)
