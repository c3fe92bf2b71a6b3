"""Exception hierarchy shared by all locout modules."""

from __future__ import annotations


class LocOutError(Exception):
    """Base class for every error raised by locout."""


class ParseError(LocOutError, ValueError):
    """Malformed input file."""


class ValidationError(LocOutError, ValueError):
    """Data violates a DataMatrix invariant (ties, zero variance, ...)."""


class ParameterError(LocOutError, ValueError):
    """A tuning parameter is out of its valid range."""


class DegenerateCoreError(LocOutError, ArithmeticError):
    """A core cannot be scaled because a column has zero variance inside it.

    ``column`` is the offending column index; ``initiator`` is filled in by
    the ensemble builder once the failing projection is known.
    """

    def __init__(self, message: str, column: int | None = None,
                 initiator: int | None = None) -> None:
        super().__init__(message)
        self.column = column
        self.initiator = initiator
