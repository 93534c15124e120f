"""Syntax tree and knowledge base containers for the rule language.

Every node is a frozen dataclass. Source locations are carried for
diagnostics but excluded from equality, so a parse of a pretty-printed
knowledge base compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Union

from leasecheck.errors import UnknownClaimError

CONSTANT = "constant"
VARIABLE = "variable"
NULL = "null"


@dataclass(frozen=True)
class Term:
    """A constant, variable, or the distinguished null constant."""

    kind: str
    name: str

    def __str__(self) -> str:
        return self.name

    @property
    def is_variable(self) -> bool:
        return self.kind == VARIABLE


def const(name: str) -> Term:
    if name == "null":
        return Term(NULL, "null")
    return Term(CONSTANT, name)


def var(name: str) -> Term:
    return Term(VARIABLE, name)


@dataclass(frozen=True)
class PredLiteral:
    """A predicate applied to terms, optionally negated in a body."""

    predicate: str
    args: tuple[Term, ...] = ()
    negated: bool = False

    def __str__(self) -> str:
        inner = self.predicate
        if self.args:
            inner += "(" + ", ".join(str(a) for a in self.args) + ")"
        return "not " + inner if self.negated else inner

    @property
    def arity(self) -> int:
        return len(self.args)

    def positive(self) -> PredLiteral:
        """The same literal with negation stripped."""
        if not self.negated:
            return self
        return PredLiteral(self.predicate, self.args, False)


@dataclass(frozen=True)
class Comparison:
    """An equality or disequality test between two terms."""

    left: Term
    op: str
    right: Term

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


BodyLiteral = Union[PredLiteral, Comparison]


@dataclass(frozen=True)
class Rule:
    """A fact (empty body) or a rule with a body of literals.

    Identifiers are assigned by the parser as ``predicate.N`` where N
    counts rules for that head predicate in source order.
    """

    id: str
    head: PredLiteral
    body: tuple[BodyLiteral, ...] = ()
    cite: str | None = None
    verdict: str | None = None
    lawgroup: str | None = None
    line: int = field(default=0, compare=False)

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __str__(self) -> str:
        if self.is_fact:
            return f"{self.head}."
        body = ", ".join(str(b) for b in self.body)
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class Law:
    """A citable law entry belonging to a law group."""

    id: str
    group: str
    text: str
    source: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AttributeSpec:
    """One case attribute of a claim: name, value enumeration, and the
    question an interviewer asks to obtain it."""

    name: str
    domain: tuple[str, ...]
    question: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ClaimSchema:
    """A claim type: its attributes and the goal predicates that decide it."""

    claim_type: str
    attributes: tuple[AttributeSpec, ...]
    violation_predicate: str
    compliance_predicate: str
    lawgroup: str
    line: int = field(default=0, compare=False)

    @cached_property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def attribute(self, name: str) -> AttributeSpec | None:
        for spec in self.attributes:
            if spec.name == name:
                return spec
        return None


KbItem = Union[Law, ClaimSchema, Rule]


@dataclass(frozen=True)
class Diagnostic:
    """A located message produced while parsing or validating."""

    severity: str
    code: str
    message: str
    line: int
    column: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message} [{self.code}]"


@dataclass(frozen=True)
class KbAst:
    """Raw parse result: top-level items in source order."""

    items: tuple[KbItem, ...]

    @property
    def rules(self) -> tuple[Rule, ...]:
        return tuple(i for i in self.items if isinstance(i, Rule))

    @property
    def laws(self) -> tuple[Law, ...]:
        return tuple(i for i in self.items if isinstance(i, Law))

    @property
    def claims(self) -> tuple[ClaimSchema, ...]:
        return tuple(i for i in self.items if isinstance(i, ClaimSchema))


@dataclass(frozen=True)
class KnowledgeBase:
    """A validated knowledge base ready for inference.

    ``strata`` maps each predicate to its stratum; rules in stratum N
    may negate only predicates of strictly lower strata.
    """

    items: tuple[KbItem, ...]
    strata: Mapping[str, int]
    warnings: tuple[Diagnostic, ...] = ()

    @cached_property
    def rules(self) -> tuple[Rule, ...]:
        return tuple(i for i in self.items if isinstance(i, Rule))

    @cached_property
    def laws(self) -> tuple[Law, ...]:
        return tuple(i for i in self.items if isinstance(i, Law))

    @cached_property
    def claims(self) -> tuple[ClaimSchema, ...]:
        return tuple(i for i in self.items if isinstance(i, ClaimSchema))

    @cached_property
    def rules_by_predicate(self) -> Mapping[str, tuple[Rule, ...]]:
        index: dict[str, list[Rule]] = {}
        for rule in self.rules:
            index.setdefault(rule.head.predicate, []).append(rule)
        return {pred: tuple(rs) for pred, rs in index.items()}

    @cached_property
    def laws_by_group(self) -> Mapping[str, tuple[Law, ...]]:
        index: dict[str, list[Law]] = {}
        for law in self.laws:
            index.setdefault(law.group, []).append(law)
        return {group: tuple(ls) for group, ls in index.items()}

    @cached_property
    def claim_types(self) -> tuple[str, ...]:
        return tuple(c.claim_type for c in self.claims)

    def claim(self, claim_type: str) -> ClaimSchema:
        for schema in self.claims:
            if schema.claim_type == claim_type:
                return schema
        raise UnknownClaimError(f"unknown claim type: {claim_type!r}")

    def laws_for_claim(self, claim_type: str) -> tuple[Law, ...]:
        schema = self.claim(claim_type)
        return self.laws_by_group.get(schema.lawgroup, ())
