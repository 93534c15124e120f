"""Exception types shared across the package.

Errors that originate in knowledge base source text carry a list of
Diagnostic records (see leasecheck.dsl.model) so callers can render
precise line and column information.
"""

from __future__ import annotations


class LeasecheckError(Exception):
    """Base class for all package-specific errors."""


class KbSourceError(LeasecheckError):
    """A knowledge base file is unusable; diagnostics say why."""

    def __init__(self, message: str, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class RuleSyntaxError(KbSourceError):
    """The knowledge base text does not match the grammar."""


class ValidationError(KbSourceError):
    """The knowledge base parses but violates a semantic invariant."""


class NegationCycleError(ValidationError):
    """Negation occurs inside a dependency cycle, so the program
    cannot be stratified."""

    def __init__(self, message: str, cycle, diagnostics=()):
        super().__init__(message, diagnostics)
        self.cycle = list(cycle)


class UnknownClaimError(LeasecheckError):
    """A claim type is not declared in the knowledge base."""


class UnknownAttributeError(LeasecheckError):
    """An attribute name is not part of the claim's schema."""


class OutOfDomainError(LeasecheckError):
    """An attribute value falls outside the attribute's enumeration."""


class UnknownPredicateError(LeasecheckError):
    """A query goal names a predicate the knowledge base never mentions."""


class EngineError(LeasecheckError):
    """The inference engine hit an internal invariant violation."""


class InterviewError(LeasecheckError):
    """Base class for interview session errors."""


class UnknownSessionError(InterviewError):
    """No session exists with the given identifier."""


class AlreadyAnsweredError(InterviewError):
    """An answer was submitted twice without the revise flag."""


class IncompleteSessionError(InterviewError):
    """Finalize was requested before every question was answered."""

    def __init__(self, message: str, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)


class ExtractorError(LeasecheckError):
    """Base class for case-fact extraction failures."""


class ExtractorConfigError(ExtractorError):
    """The extractor is not configured (for example a missing URL)."""


class CaseTooLongError(ExtractorError):
    """The case text exceeds the configured maximum length."""


class ExtractionTransportError(ExtractorError):
    """The remote model endpoint could not be reached."""


class ExtractionTimeoutError(ExtractionTransportError):
    """The remote model endpoint did not answer in time."""


class MalformedReplyError(ExtractorError):
    """The remote model kept answering in a shape we cannot parse."""


class CredentialError(ExtractorError):
    """The remote model endpoint rejected our credentials."""
