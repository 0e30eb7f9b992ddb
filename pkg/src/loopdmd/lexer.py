"""Tokenizer for the affine-loop DSL.

Produces a flat token list with character spans into the original source.
Whitespace and ``//`` line comments are discarded. Any character that starts
no token is a lexical error reported with its span.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import Diagnostic, LexError

KEYWORDS = frozenset(
    ["params", "array", "for", "in", "step", "if", "else", "read", "write", "update"]
)

# Longest-first so ".." beats a stray "." and "<=" beats "<".
OPERATORS = ["&&", "<=", ">=", "==", "..", "+", "-", "*", "/", "<", ">"]

DELIMITERS = frozenset("[]{}(),;")

MAX_INT_LITERAL = 2**63 - 1


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    INTEGER = "integer-literal"
    OPERATOR = "operator"
    DELIMITER = "delimiter"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.text}"


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens, raising :class:`LexError` on bad input.

    Spans are character offsets into ``source``; integer literals wider than
    a signed 64-bit value are rejected here rather than overflowing later.
    """
    tokens: list[Token] = []
    pos = 0
    n = len(source)
    while pos < n:
        ch = source[pos]
        if ch.isspace():
            pos += 1
            continue
        if source.startswith("//", pos):
            nl = source.find("\n", pos)
            pos = n if nl < 0 else nl + 1
            continue
        if ch.isdigit():
            end = pos + 1
            while end < n and source[end].isdigit():
                end += 1
            text = source[pos:end]
            if int(text) > MAX_INT_LITERAL:
                raise LexError(
                    [Diagnostic("lexical", f"integer literal {text} exceeds 64-bit range", pos, end)]
                )
            tokens.append(Token(TokenKind.INTEGER, text, pos, end))
            pos = end
            continue
        if _is_ident_start(ch):
            end = pos + 1
            while end < n and _is_ident_char(source[end]):
                end += 1
            text = source[pos:end]
            kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, text, pos, end))
            pos = end
            continue
        if ch in DELIMITERS:
            tokens.append(Token(TokenKind.DELIMITER, ch, pos, pos + 1))
            pos += 1
            continue
        for op in OPERATORS:
            if source.startswith(op, pos):
                tokens.append(Token(TokenKind.OPERATOR, op, pos, pos + len(op)))
                pos += len(op)
                break
        else:
            raise LexError(
                [Diagnostic("lexical", f"unexpected character {ch!r}", pos, pos + 1)]
            )
    return tokens
