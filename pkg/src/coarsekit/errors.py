"""Exception types shared across the toolkit.

The split matters for verdict semantics: a TruncationError means the finite
truncation ran out of chain or star depth and the question is undecided, which
is never the same thing as a refutation.
"""

from __future__ import annotations


class CoarseError(Exception):
    pass


class DomainError(CoarseError):
    """Inputs do not live over the expected point set, or a precondition fails."""


class ValidationError(CoarseError):
    """A space or system violates one of its structural invariants."""


class TruncationError(CoarseError):
    """The operation needs more chain or star depth than this truncation has."""


class ParseError(CoarseError):
    """A document is malformed or violates its schema."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
