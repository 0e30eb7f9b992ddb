"""Shared error and diagnostic types for the loop analysis pipeline."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    """A single reportable problem, anchored to a character span in the source."""

    category: str
    message: str
    start: int
    end: int

    def to_json(self) -> dict:
        return {
            "category": self.category,
            "message": self.message,
            "start": self.start,
            "end": self.end,
        }

    def __str__(self) -> str:
        return f"[{self.category}] {self.message} (at {self.start}..{self.end})"


class SourceError(Exception):
    """Base for errors that carry diagnostics against the input program."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


class LexError(SourceError):
    """Input text contains a character sequence that starts no token."""


class ParseError(SourceError):
    """Token stream does not match the grammar."""


class ValidationError(SourceError):
    """Program is grammatical but semantically ill-formed; carries all violations."""


class ResourceLimitError(Exception):
    """An enumeration or analysis exceeded its configured resource cap."""


class FitFailure(Exception):
    """Sampled values are not quasi-polynomial at the attempted degree/period."""


class FormulaError(Exception):
    """Formula evaluation failed (unbound symbol, bad division, negative sqrt)."""
