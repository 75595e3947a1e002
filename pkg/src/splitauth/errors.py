"""Exception types shared across the toolkit."""
from __future__ import annotations


class SplitAuthError(Exception):
    """Base class for every error raised by this package."""


class InputError(SplitAuthError, ValueError):
    """An argument is out of range or otherwise unusable."""


class StructureError(SplitAuthError, ValueError):
    """A design or code violates its structural invariants."""


class ParseError(SplitAuthError, ValueError):
    """A design file or encoding-matrix file is malformed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class UnsupportedParametersError(SplitAuthError, ValueError):
    """The requested operation does not support these parameters."""


class UnverifiedDesignError(SplitAuthError, ValueError):
    """A conversion was refused because the design failed verification.

    Carries the failing report so callers can show the counterexample.
    """

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)
