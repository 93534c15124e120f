"""Tokenizer and recursive-descent parser for .llkb knowledge base files.

The grammar, informally:

    kb      := item*
    item    := law | claim | clause
    law     := "law" ID "{" "group" ID ";" "text" STRING ";" "source" STRING ";" "}"
    claim   := "claim" ID "{" attr* goal "}"
    attr    := "attr" ID "enum" "(" ID ("," ID)* ")" "question" STRING ";"
    goal    := "goal" "violation" "=" ID "compliance" "=" ID "lawgroup" "=" ID ";"
    clause  := atom "." ann*                      (a fact)
             | atom ":-" body "." ann*            (a rule)
    body    := literal ("," literal)*
    literal := "not" atom | atom | term "==" term | term "\\=" term
    atom    := ID ("(" term ("," term)* ")")?
    term    := ID | VARIABLE
    ann     := "@" "cite" "(" ID ")"
             | "@" "verdict" "(" STRING ")"
             | "@" "lawgroup" "(" ID ")"

Identifiers start lowercase, variables start with an uppercase letter or
underscore, "%" comments run to end of line, and "null" is the
distinguished null constant. "law", "claim", and "not" are reserved and
cannot name predicates or constants.
"""

from __future__ import annotations

from dataclasses import dataclass

from leasecheck.dsl import model
from leasecheck.dsl.model import (
    AttributeSpec,
    ClaimSchema,
    Comparison,
    Diagnostic,
    KbAst,
    Law,
    PredLiteral,
    Rule,
    Term,
)
from leasecheck.errors import RuleSyntaxError

RESERVED = frozenset({"law", "claim", "not"})

_PUNCT = (":-", "==", "\\=", "{", "}", "(", ")", ";", ",", ".", "=", "@")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "variable", "string", "punct", "eof"
    value: str
    line: int
    column: int


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() and ch.islower()


def _is_var_start(ch: str) -> bool:
    return ch == "_" or (ch.isalpha() and ch.isupper())


def _is_name_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(text: str) -> list[Token]:
    """Split source text into tokens, raising RuleSyntaxError on stray
    characters or unterminated strings."""
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def fail(message: str, at_line: int, at_col: int) -> RuleSyntaxError:
        diag = Diagnostic("error", "syntax", message, at_line, at_col)
        return RuleSyntaxError(f"{at_line}:{at_col}: {message}", [diag])

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            parts: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise fail("unterminated string", start_line, start_col)
                c = text[i]
                if c == "\\":
                    if i + 1 >= n:
                        raise fail("unterminated string", start_line, start_col)
                    nxt = text[i + 1]
                    if nxt not in ('"', "\\"):
                        raise fail(f"unknown escape \\{nxt}", line, col)
                    parts.append(nxt)
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    break
                parts.append(c)
                i += 1
                col += 1
            tokens.append(Token("string", "".join(parts), start_line, start_col))
            continue
        if _is_ident_start(ch) or _is_var_start(ch):
            start_line, start_col = line, col
            j = i
            while j < n and _is_name_char(text[j]):
                j += 1
            word = text[i:j]
            kind = "variable" if _is_var_start(ch) else "ident"
            tokens.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        matched = False
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(Token("punct", punct, line, col))
                i += len(punct)
                col += len(punct)
                matched = True
                break
        if not matched:
            raise fail(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None) -> RuleSyntaxError:
        tok = tok or self.peek()
        diag = Diagnostic("error", "syntax", message, tok.line, tok.column)
        return RuleSyntaxError(f"{tok.line}:{tok.column}: {message}", [diag])

    def expect_punct(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != value:
            raise self.fail(f"expected {value!r}, found {self._describe(tok)}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.fail(f"expected {what}, found {self._describe(tok)}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.value != word:
            raise self.fail(f"expected {word!r}, found {self._describe(tok)}")
        return self.advance()

    def expect_string(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "string":
            raise self.fail(f"expected {what} string, found {self._describe(tok)}")
        return self.advance()

    @staticmethod
    def _describe(tok: Token) -> str:
        if tok.kind == "eof":
            return "end of file"
        return repr(tok.value)

    def expect_name(self, what: str) -> Token:
        """An identifier that is allowed to name a predicate or constant."""
        tok = self.expect_ident(what)
        if tok.value in RESERVED:
            raise self.fail(f"{tok.value!r} is reserved and cannot be used as {what}", tok)
        return tok

    # --- top level ---------------------------------------------------

    def parse_kb(self) -> KbAst:
        items: list[model.KbItem] = []
        rule_counts: dict[str, int] = {}
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "ident" and tok.value == "law":
                items.append(self.parse_law())
            elif tok.kind == "ident" and tok.value == "claim":
                items.append(self.parse_claim())
            elif tok.kind == "ident":
                items.append(self.parse_clause(rule_counts))
            else:
                raise self.fail(
                    f"expected a law, claim, fact, or rule, found {self._describe(tok)}"
                )
        return KbAst(tuple(items))

    def parse_law(self) -> Law:
        start = self.expect_keyword("law")
        law_id = self.expect_ident("law identifier").value
        self.expect_punct("{")
        self.expect_keyword("group")
        group = self.expect_ident("group identifier").value
        self.expect_punct(";")
        self.expect_keyword("text")
        text = self.expect_string("law text").value
        self.expect_punct(";")
        self.expect_keyword("source")
        source = self.expect_string("law source").value
        self.expect_punct(";")
        self.expect_punct("}")
        return Law(law_id, group, text, source, line=start.line)

    def parse_claim(self) -> ClaimSchema:
        start = self.expect_keyword("claim")
        claim_type = self.expect_ident("claim identifier").value
        self.expect_punct("{")
        attributes: list[AttributeSpec] = []
        while self.peek().kind == "ident" and self.peek().value == "attr":
            attributes.append(self.parse_attr())
        goal_tok = self.peek()
        if not (goal_tok.kind == "ident" and goal_tok.value == "goal"):
            raise self.fail(
                f"expected 'attr' or 'goal' inside claim block, found {self._describe(goal_tok)}"
            )
        self.advance()
        self.expect_keyword("violation")
        self.expect_punct("=")
        violation = self.expect_name("a predicate name").value
        self.expect_keyword("compliance")
        self.expect_punct("=")
        compliance = self.expect_name("a predicate name").value
        self.expect_keyword("lawgroup")
        self.expect_punct("=")
        lawgroup = self.expect_ident("lawgroup identifier").value
        self.expect_punct(";")
        self.expect_punct("}")
        return ClaimSchema(
            claim_type,
            tuple(attributes),
            violation,
            compliance,
            lawgroup,
            line=start.line,
        )

    def parse_attr(self) -> AttributeSpec:
        start = self.expect_keyword("attr")
        name = self.expect_name("an attribute name").value
        self.expect_keyword("enum")
        self.expect_punct("(")
        values = [self.expect_name("an enum value").value]
        while self.peek().kind == "punct" and self.peek().value == ",":
            self.advance()
            values.append(self.expect_name("an enum value").value)
        self.expect_punct(")")
        self.expect_keyword("question")
        question = self.expect_string("question").value
        self.expect_punct(";")
        return AttributeSpec(name, tuple(values), question, line=start.line)

    # --- clauses -----------------------------------------------------

    def parse_clause(self, rule_counts: dict[str, int]) -> Rule:
        head_tok = self.peek()
        head = self.parse_atom()
        body: tuple[model.BodyLiteral, ...] = ()
        nxt = self.peek()
        if nxt.kind == "punct" and nxt.value == ":-":
            self.advance()
            literals = [self.parse_literal()]
            while self.peek().kind == "punct" and self.peek().value == ",":
                self.advance()
                literals.append(self.parse_literal())
            body = tuple(literals)
        self.expect_punct(".")
        cite, verdict, lawgroup = self.parse_annotations()
        pred = head.predicate
        rule_counts[pred] = rule_counts.get(pred, 0) + 1
        rule_id = f"{pred}.{rule_counts[pred]}"
        return Rule(
            rule_id,
            head,
            body,
            cite=cite,
            verdict=verdict,
            lawgroup=lawgroup,
            line=head_tok.line,
        )

    def parse_annotations(self) -> tuple[str | None, str | None, str | None]:
        cite: str | None = None
        verdict: str | None = None
        lawgroup: str | None = None
        while self.peek().kind == "punct" and self.peek().value == "@":
            at = self.advance()
            name_tok = self.expect_ident("annotation name")
            self.expect_punct("(")
            if name_tok.value == "cite":
                if cite is not None:
                    raise self.fail("duplicate @cite annotation", at)
                cite = self.expect_ident("law identifier").value
            elif name_tok.value == "verdict":
                if verdict is not None:
                    raise self.fail("duplicate @verdict annotation", at)
                verdict = self.expect_string("verdict").value
            elif name_tok.value == "lawgroup":
                if lawgroup is not None:
                    raise self.fail("duplicate @lawgroup annotation", at)
                lawgroup = self.expect_ident("lawgroup identifier").value
            else:
                raise self.fail(
                    f"unknown annotation @{name_tok.value}", name_tok
                )
            self.expect_punct(")")
        return cite, verdict, lawgroup

    def parse_literal(self) -> model.BodyLiteral:
        tok = self.peek()
        if tok.kind == "ident" and tok.value == "not":
            self.advance()
            atom = self.parse_atom()
            return PredLiteral(atom.predicate, atom.args, negated=True)
        if tok.kind == "variable":
            left = self.parse_term()
            return self.parse_comparison_tail(left)
        if tok.kind == "ident":
            nxt = self.peek(1)
            if nxt.kind == "punct" and nxt.value in ("==", "\\="):
                left = self.parse_term()
                return self.parse_comparison_tail(left)
            return self.parse_atom()
        raise self.fail(f"expected a body literal, found {self._describe(tok)}")

    def parse_comparison_tail(self, left: Term) -> Comparison:
        tok = self.peek()
        if tok.kind != "punct" or tok.value not in ("==", "\\="):
            raise self.fail(
                f"expected '==' or '\\=' after term, found {self._describe(tok)}"
            )
        op = self.advance().value
        right = self.parse_term()
        return Comparison(left, op, right)

    def parse_atom(self) -> PredLiteral:
        name_tok = self.expect_name("a predicate name")
        if name_tok.value == "null":
            raise self.fail("'null' cannot be used as a predicate name", name_tok)
        args: tuple[Term, ...] = ()
        if self.peek().kind == "punct" and self.peek().value == "(":
            self.advance()
            terms = [self.parse_term()]
            while self.peek().kind == "punct" and self.peek().value == ",":
                self.advance()
                terms.append(self.parse_term())
            self.expect_punct(")")
            args = tuple(terms)
        return PredLiteral(name_tok.value, args)

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "variable":
            self.advance()
            return model.var(tok.value)
        if tok.kind == "ident":
            if tok.value in RESERVED:
                raise self.fail(
                    f"{tok.value!r} is reserved and cannot be used as a constant", tok
                )
            self.advance()
            return model.const(tok.value)
        raise self.fail(f"expected a term, found {self._describe(tok)}")


def parse_kb(text: str) -> KbAst:
    """Parse knowledge base source text into a raw syntax tree.

    Raises RuleSyntaxError (carrying one Diagnostic) on the first
    grammar violation. Semantic checks live in leasecheck.dsl.validate.
    """
    return _Parser(tokenize(text)).parse_kb()
