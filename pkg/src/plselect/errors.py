"""Exception hierarchy shared by every plselect module.

All failures carry enough context to act on: hypothesis violations and glue
conflicts name the cell at which the offending inequality was checked, size
errors name the cap that was exceeded, and parse errors name the JSON path.
"""

from __future__ import annotations


class PLSelectError(Exception):
    """Base class for all library errors."""


class InvalidDomainError(PLSelectError):
    """A complex fails a structural invariant (ordering, duplicate edges, ...)."""


class InvalidParameterError(PLSelectError):
    """An argument is outside the documented range (n < 2 links, float input, ...)."""


class SizeCapError(PLSelectError):
    """An exhaustive routine was asked to run above its configured cap."""

    def __init__(self, message: str, *, cap: int | None = None, actual: int | None = None):
        super().__init__(message)
        self.cap = cap
        self.actual = actual


class HypothesisViolation(PLSelectError):
    """A verified inequality failed; ``clause`` says which, ``witness`` where.

    ``witness`` is a cell id such as ``"v3"`` or ``"e1"`` on the complex the
    check ran on.
    """

    def __init__(self, clause: str, witness: str | None = None, message: str | None = None):
        text = message or (f"{clause} fails at {witness}" if witness else f"{clause} fails")
        super().__init__(text)
        self.clause = clause
        self.witness = witness


class GlueConflictError(PLSelectError):
    """Two pieces disagree on a shared cell; ``witness`` is the cell id."""

    def __init__(self, witness: str, message: str | None = None):
        super().__init__(message or f"pieces disagree at {witness}")
        self.witness = witness


class NoRealRootsError(PLSelectError):
    """A quadratic has negative discriminant, so no real factorization exists."""

    def __init__(self, witness: str, message: str | None = None):
        super().__init__(message or f"negative discriminant at {witness}")
        self.witness = witness


class ProblemFormatError(PLSelectError):
    """A problem file fails validation; ``location`` is a JSON-ish path."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
