"""Exception types shared across the pipeline and the query layers."""

from __future__ import annotations


class TermnetError(Exception):
    """Base class for all package-specific errors."""


class UnknownTermError(TermnetError, KeyError):
    """A queried term is not present in the vocabulary or store."""

    def __init__(self, term: str, context: str = ""):
        self.term = term
        detail = f"unknown term: {term!r}"
        if context:
            detail = f"{detail} ({context})"
        super().__init__(detail)

    def __str__(self) -> str:  # KeyError would repr() the message otherwise
        return self.args[0]


class DegenerateVectorError(TermnetError, ValueError):
    """A term's stored vector has zero norm and cannot enter cosine queries."""

    def __init__(self, term: str):
        self.term = term
        super().__init__(f"term {term!r} has a zero-norm vector")


class InsufficientOverlapError(TermnetError, ValueError):
    """Too few benchmark pairs resolved against the store to correlate."""


class UndefinedCorrelationError(TermnetError, ValueError):
    """Rank correlation is undefined (zero variance in one argument)."""
