"""Canonical pretty-printer for knowledge bases.

print_kb produces text that parses back to a structurally equal tree
(source locations are ignored by node equality), which makes it usable
both for display and for stable content fingerprints.
"""

from __future__ import annotations

from leasecheck.dsl.model import ClaimSchema, KbAst, KnowledgeBase, Law, Rule


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _print_law(law: Law) -> str:
    return (
        f"law {law.id} {{\n"
        f'  group {law.group};\n'
        f'  text "{_escape(law.text)}";\n'
        f'  source "{_escape(law.source)}";\n'
        f"}}"
    )


def _print_claim(claim: ClaimSchema) -> str:
    lines = [f"claim {claim.claim_type} {{"]
    for attr in claim.attributes:
        enum = ", ".join(attr.domain)
        lines.append(
            f'  attr {attr.name} enum({enum}) question "{_escape(attr.question)}";'
        )
    lines.append(
        f"  goal violation={claim.violation_predicate}"
        f" compliance={claim.compliance_predicate}"
        f" lawgroup={claim.lawgroup};"
    )
    lines.append("}")
    return "\n".join(lines)


def _annotations(rule: Rule) -> str:
    parts = []
    if rule.cite is not None:
        parts.append(f"@cite({rule.cite})")
    if rule.verdict is not None:
        parts.append(f'@verdict("{_escape(rule.verdict)}")')
    if rule.lawgroup is not None:
        parts.append(f"@lawgroup({rule.lawgroup})")
    return " ".join(parts)


def _print_rule(rule: Rule) -> str:
    if rule.is_fact:
        text = f"{rule.head}."
    elif len(rule.body) <= 2:
        body = ", ".join(str(lit) for lit in rule.body)
        text = f"{rule.head} :- {body}."
    else:
        body = ",\n    ".join(str(lit) for lit in rule.body)
        text = f"{rule.head} :-\n    {body}."
    ann = _annotations(rule)
    if ann:
        text += f"\n    {ann}" if not rule.is_fact else f" {ann}"
    return text


def print_kb(kb: KbAst | KnowledgeBase) -> str:
    """Render a knowledge base as canonical source text."""
    chunks: list[str] = []
    prev_was_fact = False
    for item in kb.items:
        if isinstance(item, Law):
            rendered = _print_law(item)
            is_fact = False
        elif isinstance(item, ClaimSchema):
            rendered = _print_claim(item)
            is_fact = False
        else:
            rendered = _print_rule(item)
            is_fact = item.is_fact
        if chunks:
            # consecutive facts stay in one block, everything else gets
            # a blank separator line
            chunks.append("\n" if (is_fact and prev_was_fact) else "\n\n")
        chunks.append(rendered)
        prev_was_fact = is_fact
    chunks.append("\n")
    return "".join(chunks)
