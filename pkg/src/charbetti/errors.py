"""Exception hierarchy shared by the engine, the service, and the CLI.

Every error carries a stable ``code`` so the HTTP layer and the CLI can
map failures without string matching: ``domain-error`` (exit 1),
``resource-limit`` (exit 2), ``parse-error`` (exit 3).
"""

from __future__ import annotations


class CharbettiError(Exception):
    code = "domain-error"


class DomainError(CharbettiError):
    """Invalid input for an otherwise well-formed request."""

    code = "domain-error"


class ArgumentError(DomainError):
    pass


class ContextMismatchError(DomainError):
    pass


class DisjointnessError(DomainError):
    pass


class SquarefreeRequiredError(DomainError):
    pass


class NotInLatticeError(DomainError):
    pass


class InvalidFieldError(DomainError):
    pass


class PartitionError(DomainError):
    pass


class UndefinedInvariantError(DomainError):
    pass


class UnknownCorpusError(DomainError):
    pass


class BoundViolationError(DomainError):
    """A proved inequality failed numerically: that is an engine bug."""


class ResourceLimitError(CharbettiError):
    """A configured guard tripped before the computation finished."""

    code = "resource-limit"

    def __init__(self, guard: str, message: str):
        super().__init__(message)
        self.guard = guard


class FormatError(CharbettiError):
    """Malformed ideal/complex/graph text."""

    code = "parse-error"
