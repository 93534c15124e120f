"""Deterministic inference over a validated knowledge base.

Resolution is top-down (SLD) with chronological rule order and
left-to-right body evaluation. Negation is negation-as-failure,
well-defined because validation only admits stratified programs.

The derivation trace records rule firings: a rule is recorded when its
body has been proven, in completion order, and only along the proof
path that succeeds. Proof work done inside a negation-as-failure check
never appears in the trace. Each recorded body literal carries a
status; the engine emits "satisfied" and "naf-satisfied", while
"failed" is part of the status vocabulary for downstream tooling.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Mapping

from leasecheck.dsl.model import (
    VARIABLE,
    Comparison,
    KbAst,
    KnowledgeBase,
    Law,
    ClaimSchema,
    PredLiteral,
    Rule,
    Term,
    const,
)
from leasecheck.errors import (
    EngineError,
    NegationCycleError,
    OutOfDomainError,
    UnknownAttributeError,
    UnknownPredicateError,
)

UNKNOWN = "unknown"
CASE_PREDICATE = "case"

SATISFIED = "satisfied"
FAILED = "failed"
NAF_SATISFIED = "naf-satisfied"

LAWFUL = "lawful"
UNLAWFUL = "unlawful"
UNDETERMINED = "undetermined"

# renamed variables get this marker, which cannot occur in source text
_RENAME_SEP = "#"


# --- stratification ----------------------------------------------------


def stratify(kb: KbAst | KnowledgeBase) -> dict[str, int]:
    """Assign every predicate a stratum such that each rule's head sits
    at or above its positive body predicates and strictly above its
    negated ones. Raises NegationCycleError when impossible."""
    rules = kb.rules
    preds: set[str] = set()
    for rule in rules:
        preds.add(rule.head.predicate)
        for lit in rule.body:
            if isinstance(lit, PredLiteral):
                preds.add(lit.predicate)
    strata = dict.fromkeys(sorted(preds), 0)
    limit = len(preds)
    while True:
        changed = False
        for rule in rules:
            head = rule.head.predicate
            for lit in rule.body:
                if not isinstance(lit, PredLiteral):
                    continue
                needed = strata[lit.predicate] + (1 if lit.negated else 0)
                if strata[head] < needed:
                    strata[head] = needed
                    changed = True
        if not changed:
            return strata
        if strata and max(strata.values()) > limit:
            break
    cycle = _find_negation_cycle(rules)
    raise NegationCycleError(
        "negation occurs in a dependency cycle: " + " -> ".join(cycle), cycle
    )


def _find_negation_cycle(rules: tuple[Rule, ...]) -> list[str]:
    edges: dict[str, set[str]] = {}
    neg_edges: list[tuple[str, str]] = []
    for rule in rules:
        head = rule.head.predicate
        for lit in rule.body:
            if isinstance(lit, PredLiteral):
                edges.setdefault(head, set()).add(lit.predicate)
                if lit.negated:
                    neg_edges.append((head, lit.predicate))
    for head, dep in neg_edges:
        path = _dependency_path(edges, dep, head)
        if path is not None:
            return [head] + path
    raise EngineError("stratification overflowed without a negation cycle")


def _dependency_path(
    edges: Mapping[str, set[str]], src: str, dst: str
) -> list[str] | None:
    if src == dst:
        return [src]
    seen = {src}
    queue: deque[list[str]] = deque([[src]])
    while queue:
        path = queue.popleft()
        for nxt in sorted(edges.get(path[-1], ())):
            if nxt in seen:
                continue
            if nxt == dst:
                return path + [nxt]
            seen.add(nxt)
            queue.append(path + [nxt])
    return None


# --- runtime data types ------------------------------------------------


@dataclass(frozen=True)
class Firing:
    """One successful rule application: grounded head and body literals
    with per-literal statuses."""

    rule_id: str
    head: str
    body: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class EvalResult:
    """Outcome of evaluating a single goal literal."""

    success: bool
    bindings: Mapping[str, str]
    firings: tuple[Firing, ...]


@dataclass(frozen=True)
class CaseFacts:
    """Attribute values for one claim instance. Every schema attribute
    is present; unanswered ones hold the sentinel "unknown"."""

    claim_type: str
    values: Mapping[str, str]

    @property
    def complete(self) -> bool:
        return UNKNOWN not in self.values.values()

    @property
    def missing(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.values.items() if v == UNKNOWN)


@dataclass(frozen=True)
class Verdict:
    """The result of analyzing one case: outcome, human-readable
    message, the claim's laws in declaration order, and the trace."""

    outcome: str
    message: str
    citations: tuple[Law, ...]
    trace: tuple[Firing, ...]
    missing_attributes: tuple[str, ...] = ()


def make_case_facts(schema: ClaimSchema, values: Mapping[str, str]) -> CaseFacts:
    """Build CaseFacts for a claim, filling unanswered attributes with
    "unknown" and rejecting stray names or out-of-enumeration values."""
    stray = sorted(set(values) - set(schema.attribute_names))
    if stray:
        raise UnknownAttributeError(
            f"not attributes of claim {schema.claim_type!r}: {', '.join(stray)}"
        )
    filled: dict[str, str] = {}
    for attr in schema.attributes:
        value = values.get(attr.name, UNKNOWN)
        if value != UNKNOWN and value not in attr.domain:
            raise OutOfDomainError(
                f"{attr.name} must be one of {', '.join(attr.domain)}; got {value!r}"
            )
        filled[attr.name] = value
    return CaseFacts(schema.claim_type, filled)


# --- resolution --------------------------------------------------------


def _resolve(term: Term, env: Mapping[str, Term]) -> Term:
    while term.kind == VARIABLE:
        bound = env.get(term.name)
        if bound is None:
            return term
        term = bound
    return term


def _unify_terms(a: Term, b: Term, env: dict[str, Term]) -> dict[str, Term] | None:
    a = _resolve(a, env)
    b = _resolve(b, env)
    if a == b:
        return env
    if a.kind == VARIABLE:
        extended = dict(env)
        extended[a.name] = b
        return extended
    if b.kind == VARIABLE:
        extended = dict(env)
        extended[b.name] = a
        return extended
    return None


def _unify_literal(
    goal: PredLiteral, head: PredLiteral, env: dict[str, Term]
) -> dict[str, Term] | None:
    if goal.arity != head.arity:
        return None
    for a, b in zip(goal.args, head.args):
        result = _unify_terms(a, b, env)
        if result is None:
            return None
        env = result
    return env


def _rename_term(term: Term, tag: str) -> Term:
    if term.kind == VARIABLE:
        return Term(VARIABLE, tag + term.name)
    return term


def _rename_literal(lit: PredLiteral | Comparison, tag: str):
    if isinstance(lit, Comparison):
        return Comparison(_rename_term(lit.left, tag), lit.op, _rename_term(lit.right, tag))
    return PredLiteral(lit.predicate, tuple(_rename_term(a, tag) for a in lit.args), lit.negated)


def _display_term(term: Term, env: Mapping[str, Term]) -> Term:
    term = _resolve(term, env)
    if term.kind == VARIABLE:
        return Term(VARIABLE, term.name.split(_RENAME_SEP, 1)[-1])
    return term


def _ground_literal(lit: PredLiteral | Comparison, env: Mapping[str, Term]):
    if isinstance(lit, Comparison):
        return Comparison(
            _display_term(lit.left, env), lit.op, _display_term(lit.right, env)
        )
    return PredLiteral(
        lit.predicate, tuple(_display_term(a, env) for a in lit.args), lit.negated
    )


def _goal_key(lit: PredLiteral, env: Mapping[str, Term]) -> tuple:
    """Variant-invariant key for the loop check: unbound variables are
    numbered by first occurrence."""
    numbering: dict[str, int] = {}
    args = []
    for arg in lit.args:
        term = _resolve(arg, env)
        if term.kind == VARIABLE:
            args.append(("?", numbering.setdefault(term.name, len(numbering))))
        else:
            args.append((term.kind, term.name))
    return (lit.predicate, tuple(args))


class _Solver:
    """SLD resolution against a knowledge base plus a case-fact overlay.

    Generators follow an undo-on-resume discipline: a rule's firing
    record is appended when its body succeeds and popped when the
    consumer backtracks past it, so whatever remains in the buffer when
    the search stops is exactly the committed proof path.
    """

    def __init__(self, kb: KnowledgeBase, overlay: Mapping[str, tuple[Rule, ...]]):
        self.kb = kb
        self.overlay = overlay
        self._fresh = itertools.count(1)

    def clauses(self, predicate: str) -> tuple[Rule, ...]:
        local = self.overlay.get(predicate, ())
        return local + self.kb.rules_by_predicate.get(predicate, ())

    def solve_literal(
        self,
        lit: PredLiteral | Comparison,
        env: dict[str, Term],
        buf: list[Firing],
        ancestors: frozenset,
    ) -> Iterator[dict[str, Term]]:
        if isinstance(lit, Comparison):
            left = _resolve(lit.left, env)
            right = _resolve(lit.right, env)
            if left.kind == VARIABLE or right.kind == VARIABLE:
                raise EngineError(
                    f"comparison {lit} is not ground at evaluation time; "
                    "the knowledge base must not have passed safety validation"
                )
            if (lit.op == "==") == (left == right):
                yield env
            return
        if lit.negated:
            scratch: list[Firing] = []
            for _ in self.solve_pred(lit.positive(), env, scratch, frozenset()):
                return
            yield env
            return
        yield from self.solve_pred(lit, env, buf, ancestors)

    def solve_pred(
        self,
        lit: PredLiteral,
        env: dict[str, Term],
        buf: list[Firing],
        ancestors: frozenset,
    ) -> Iterator[dict[str, Term]]:
        key = _goal_key(lit, env)
        if key in ancestors:
            return
        ancestors = ancestors | {key}
        for rule in self.clauses(lit.predicate):
            tag = f"_{next(self._fresh)}{_RENAME_SEP}"
            head = PredLiteral(
                rule.head.predicate,
                tuple(_rename_term(a, tag) for a in rule.head.args),
            )
            unified = _unify_literal(lit, head, env)
            if unified is None:
                continue
            if rule.is_fact:
                yield unified
                continue
            body = tuple(_rename_literal(b, tag) for b in rule.body)
            for solved in self.solve_body(body, unified, buf, ancestors):
                buf.append(self.firing_record(rule.id, head, body, solved))
                yield solved
                buf.pop()

    def solve_body(
        self,
        literals: tuple,
        env: dict[str, Term],
        buf: list[Firing],
        ancestors: frozenset,
    ) -> Iterator[dict[str, Term]]:
        if not literals:
            yield env
            return
        first, rest = literals[0], literals[1:]
        for env2 in self.solve_literal(first, env, buf, ancestors):
            yield from self.solve_body(rest, env2, buf, ancestors)

    @staticmethod
    def firing_record(
        rule_id: str,
        head: PredLiteral,
        body: tuple,
        env: Mapping[str, Term],
    ) -> Firing:
        recorded = []
        for lit in body:
            grounded = _ground_literal(lit, env)
            negated = isinstance(lit, PredLiteral) and lit.negated
            recorded.append((str(grounded), NAF_SATISFIED if negated else SATISFIED))
        return Firing(rule_id, str(_ground_literal(head, env)), tuple(recorded))


def _overlay_facts(facts: CaseFacts) -> dict[str, tuple[Rule, ...]]:
    injected = tuple(
        Rule(
            f"{CASE_PREDICATE}.{i}",
            PredLiteral(CASE_PREDICATE, (const(name), const(value))),
        )
        for i, (name, value) in enumerate(facts.values.items(), 1)
    )
    return {CASE_PREDICATE: injected}


# --- public operations ---------------------------------------------------


def evaluate(
    kb: KnowledgeBase, facts: CaseFacts | None, goal: PredLiteral
) -> EvalResult:
    """Evaluate one goal literal against the knowledge base, plus the
    case-fact overlay when facts are given. Returns the first solution's
    bindings and the firings along its proof path."""
    if facts is not None and not facts.complete:
        raise EngineError(
            "evaluate requires complete case facts; unanswered attributes "
            "must never reach rule evaluation"
        )
    overlay = _overlay_facts(facts) if facts is not None else {}
    target = goal.positive() if goal.negated else goal
    if target.predicate not in kb.strata and target.predicate not in overlay:
        raise UnknownPredicateError(
            f"unknown predicate: {target.predicate!r}"
        )
    solver = _Solver(kb, overlay)
    buf: list[Firing] = []
    goal_vars = [a.name for a in goal.args if a.is_variable]
    for env in solver.solve_literal(goal, {}, buf, frozenset()):
        bindings = {
            name: str(_display_term(Term(VARIABLE, name), env)) for name in goal_vars
        }
        return EvalResult(True, bindings, tuple(buf))
    return EvalResult(False, {}, ())


def _attempt_rule(solver: _Solver, rule: Rule) -> tuple[Firing, ...] | None:
    if rule.is_fact:
        return (Firing(rule.id, str(rule.head), ()),)
    buf: list[Firing] = []
    tag = f"_{next(solver._fresh)}{_RENAME_SEP}"
    body = tuple(_rename_literal(b, tag) for b in rule.body)
    for env in solver.solve_body(body, {}, buf, frozenset()):
        buf.append(solver.firing_record(rule.id, rule.head, body, env))
        return tuple(buf)
    return None


def _default_message(outcome: str, rule_id: str) -> str:
    label = "Violation" if outcome == UNLAWFUL else "Compliance"
    return f"{label} established by rule {rule_id}."


def analyze(kb: KnowledgeBase, facts: CaseFacts) -> Verdict:
    """Decide one case. Incomplete facts short-circuit to undetermined
    without touching the rules; otherwise violation rules are tried in
    source order, then compliance rules, first success deciding the
    outcome. Citations are always the claim's law group in declaration
    order, independent of the outcome."""
    schema = kb.claim(facts.claim_type)
    citations = kb.laws_for_claim(facts.claim_type)
    missing = facts.missing
    if missing:
        return Verdict(
            UNDETERMINED,
            "Undetermined: missing " + ", ".join(missing),
            citations,
            (),
            missing,
        )
    solver = _Solver(kb, _overlay_facts(facts))
    goals = (
        (UNLAWFUL, schema.violation_predicate),
        (LAWFUL, schema.compliance_predicate),
    )
    for outcome, predicate in goals:
        for rule in kb.rules_by_predicate.get(predicate, ()):
            firings = _attempt_rule(solver, rule)
            if firings is not None:
                message = rule.verdict or _default_message(outcome, rule.id)
                return Verdict(outcome, message, citations, firings)
    return Verdict(UNDETERMINED, "insufficient rules matched", citations, ())


def explain(verdict: Verdict) -> str:
    """Render a verdict: numbered law citations, the verdict message,
    and for decided outcomes the decisive rule's grounded body."""
    lines = [f"{i}. {law.text}" for i, law in enumerate(verdict.citations, 1)]
    if lines:
        lines.append("")
    lines.append(verdict.message)
    if verdict.outcome != UNDETERMINED and verdict.trace:
        decisive = verdict.trace[-1]
        lines.append("")
        lines.append(f"Decisive rule {decisive.rule_id}:")
        for text, status in decisive.body:
            lines.append(f"  {text}  [{status}]")
    return "\n".join(lines)
