"""Semantic validation of a parsed knowledge base.

Checks rule safety, identifier uniqueness, reference integrity,
predicate arity discipline, and stratifiability, then seals the tree
into an immutable KnowledgeBase. Errors raise ValidationError carrying
one Diagnostic per problem; non-fatal findings become warnings on the
returned knowledge base.
"""

from __future__ import annotations

import leasecheck.engine
from leasecheck.dsl.model import (
    Comparison,
    Diagnostic,
    KbAst,
    KnowledgeBase,
    PredLiteral,
    Rule,
)
from leasecheck.errors import NegationCycleError, ValidationError

_UNKNOWN = "unknown"
_CASE = "case"


def _variable_names(lit: PredLiteral) -> set[str]:
    return {a.name for a in lit.args if a.is_variable}


def _safety_errors(rule: Rule) -> list[Diagnostic]:
    """Head, negated, and comparison variables must occur in a positive
    body literal; otherwise evaluation could hit unbound terms."""
    positive: set[str] = set()
    for lit in rule.body:
        if isinstance(lit, PredLiteral) and not lit.negated:
            positive |= _variable_names(lit)
    unsafe: set[str] = set()
    unsafe |= _variable_names(rule.head) - positive
    for lit in rule.body:
        if isinstance(lit, PredLiteral) and lit.negated:
            unsafe |= _variable_names(lit) - positive
        elif isinstance(lit, Comparison):
            for term in (lit.left, lit.right):
                if term.is_variable and term.name not in positive:
                    unsafe.add(term.name)
    if not unsafe:
        return []
    names = ", ".join(sorted(unsafe))
    return [
        Diagnostic(
            "error",
            "safety",
            f"rule {rule.id}: variable(s) {names} must also occur in a positive body literal",
            rule.line,
        )
    ]


def validate_kb(ast: KbAst) -> KnowledgeBase:
    """Validate a parsed tree and return a sealed KnowledgeBase.

    Raises ValidationError (or its subclass NegationCycleError) with
    located diagnostics when any invariant fails.
    """
    errors: list[Diagnostic] = []
    warnings: list[Diagnostic] = []

    def error(code: str, message: str, line: int) -> None:
        errors.append(Diagnostic("error", code, message, line))

    laws_by_id = {}
    for law in ast.laws:
        if law.id in laws_by_id:
            error("duplicate-id", f"law id {law.id!r} already declared", law.line)
        else:
            laws_by_id[law.id] = law
        if not law.text.strip():
            error("empty-law-text", f"law {law.id!r} has empty text", law.line)
    groups = {law.group for law in ast.laws}

    claim_types: set[str] = set()
    for claim in ast.claims:
        if claim.claim_type in claim_types:
            error(
                "duplicate-id",
                f"claim {claim.claim_type!r} already declared",
                claim.line,
            )
        claim_types.add(claim.claim_type)
        attr_names: set[str] = set()
        for attr in claim.attributes:
            if attr.name in attr_names:
                error(
                    "duplicate-attribute",
                    f"attribute {attr.name!r} declared twice in claim {claim.claim_type!r}",
                    attr.line,
                )
            attr_names.add(attr.name)
            if _UNKNOWN in attr.domain:
                error(
                    "reserved-value",
                    f"attribute {attr.name!r}: {_UNKNOWN!r} is the missing-answer "
                    "sentinel and cannot be an enum value",
                    attr.line,
                )
        if claim.lawgroup not in groups:
            error(
                "dangling-reference",
                f"claim {claim.claim_type!r} references lawgroup "
                f"{claim.lawgroup!r} but no law declares it",
                claim.line,
            )

    arities: dict[str, tuple[int, int]] = {}

    def check_arity(predicate: str, arity: int, line: int) -> None:
        if predicate == _CASE and arity != 2:
            error(
                "case-arity",
                f"'{_CASE}' is the built-in attribute/value predicate and always has two arguments",
                line,
            )
            return
        previous = arities.get(predicate)
        if previous is None:
            arities[predicate] = (arity, line)
        elif previous[0] != arity:
            error(
                "arity-mismatch",
                f"predicate {predicate!r} used with arity {arity} here "
                f"but arity {previous[0]} at line {previous[1]}",
                line,
            )

    defined = {r.head.predicate for r in ast.rules}
    for rule in ast.rules:
        check_arity(rule.head.predicate, rule.head.arity, rule.line)
        if rule.head.predicate == _CASE:
            error(
                "reserved-predicate",
                f"'{_CASE}' facts are injected by the engine and cannot be defined in a knowledge base",
                rule.line,
            )
        for lit in rule.body:
            if isinstance(lit, PredLiteral):
                check_arity(lit.predicate, lit.arity, rule.line)
        errors.extend(_safety_errors(rule))
        if rule.cite is not None and rule.cite not in laws_by_id:
            error(
                "dangling-reference",
                f"rule {rule.id} cites unknown law {rule.cite!r}",
                rule.line,
            )
        if rule.lawgroup is not None and rule.lawgroup not in groups:
            error(
                "dangling-reference",
                f"rule {rule.id} names unknown lawgroup {rule.lawgroup!r}",
                rule.line,
            )

    unknown_preds: dict[str, int] = {}
    for rule in ast.rules:
        for lit in rule.body:
            if (
                isinstance(lit, PredLiteral)
                and lit.predicate not in defined
                and lit.predicate != _CASE
            ):
                unknown_preds.setdefault(lit.predicate, rule.line)
    for predicate, line in unknown_preds.items():
        warnings.append(
            Diagnostic(
                "warning",
                "unknown-predicate",
                f"predicate {predicate!r} has no facts or rules; it can never be proven",
                line,
            )
        )

    for claim in ast.claims:
        goal_roles = (
            ("violation", claim.violation_predicate),
            ("compliance", claim.compliance_predicate),
        )
        for role, predicate in goal_roles:
            goal_rules = [r for r in ast.rules if r.head.predicate == predicate]
            if not goal_rules:
                warnings.append(
                    Diagnostic(
                        "warning",
                        "no-goal-rules",
                        f"claim {claim.claim_type!r} {role} predicate "
                        f"{predicate!r} has no rules",
                        claim.line,
                    )
                )
            for goal_rule in goal_rules:
                if goal_rule.head.arity != 0:
                    error(
                        "goal-arity",
                        f"goal predicate {predicate!r} must be propositional (no arguments)",
                        goal_rule.line,
                    )

    if errors:
        ordered = sorted(errors, key=lambda d: (d.line, d.column))
        raise ValidationError(
            f"{len(ordered)} validation error(s); first: {ordered[0].message}",
            ordered,
        )

    try:
        strata = leasecheck.engine.stratify(ast)
    except NegationCycleError as err:
        in_cycle = set(err.cycle)
        line = next((r.line for r in ast.rules if r.head.predicate in in_cycle), 1)
        diag = Diagnostic("error", "negation-cycle", str(err), line)
        raise NegationCycleError(str(err), err.cycle, [diag]) from None

    return KnowledgeBase(ast.items, strata, tuple(warnings))
