"""Recursive-descent parser for the affine-loop DSL.

Grammar, in precedence order: a program is ``params`` declarations, then
``array`` declarations, then statements. Expressions are left-associative
with unary minus binding tightest, then ``*`` and ``/``, then ``+`` and
``-``. ``step`` defaults to 1 and ``else`` to an empty block.
"""

from __future__ import annotations

from .ast import (
    Access,
    Add,
    ArrayDecl,
    Comparison,
    Const,
    Expr,
    FloorDiv,
    For,
    If,
    Mul,
    Neg,
    Program,
    Stmt,
    Sub,
    Var,
)
from .errors import Diagnostic, ParseError
from .lexer import Token, TokenKind, tokenize

CMP_OPS = ("<", "<=", "==", ">=", ">")


class _Parser:
    def __init__(self, tokens: list[Token], source_len: int):
        self.tokens = tokens
        self.pos = 0
        self.source_len = source_len

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, kind: TokenKind, text: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind is kind and (text is None or tok.text == text)

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input", expected=None)
        self.pos += 1
        return tok

    def expect(self, kind: TokenKind, text: str | None = None, expected: str | None = None) -> Token:
        if self.at(kind, text):
            return self.advance()
        want = expected or (f"`{text}`" if text else kind.value)
        raise self.error(f"expected {want}", expected=want)

    def error(self, message: str, expected: str | None) -> ParseError:
        tok = self.peek()
        if tok is None:
            start = end = self.source_len
            found = "end of input"
        else:
            start, end = tok.start, tok.end
            found = f"`{tok.text}`"
        return ParseError([Diagnostic("syntax", f"{message}, found {found}", start, end)])

    # -- grammar ----------------------------------------------------------

    def program(self) -> Program:
        params: list[str] = []
        param_spans: list[tuple[int, int]] = []
        while self.at(TokenKind.KEYWORD, "params"):
            self.advance()
            name = self.expect(TokenKind.IDENTIFIER, expected="parameter name")
            params.append(name.text)
            param_spans.append(name.span)
            while self.at(TokenKind.DELIMITER, ","):
                self.advance()
                name = self.expect(TokenKind.IDENTIFIER, expected="parameter name")
                params.append(name.text)
                param_spans.append(name.span)
            self.expect(TokenKind.DELIMITER, ";")

        arrays: list[ArrayDecl] = []
        while self.at(TokenKind.KEYWORD, "array"):
            start = self.advance().start
            name = self.expect(TokenKind.IDENTIFIER, expected="array name")
            self.expect(TokenKind.DELIMITER, "[")
            extents = self.expr_list()
            self.expect(TokenKind.DELIMITER, "]")
            end = self.expect(TokenKind.DELIMITER, ";").end
            arrays.append(ArrayDecl(name.text, extents, start, end))

        body: list[Stmt] = []
        while self.peek() is not None:
            body.append(self.stmt())
        return Program(params, arrays, body, param_spans)

    def stmt(self) -> Stmt:
        if self.at(TokenKind.KEYWORD, "for"):
            return self.for_stmt()
        if self.at(TokenKind.KEYWORD, "if"):
            return self.if_stmt()
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.KEYWORD and tok.text in ("read", "write", "update"):
            return self.access_stmt()
        raise self.error(
            "expected a statement (`for`, `if`, `read`, `write`, or `update`)",
            expected="statement",
        )

    def for_stmt(self) -> For:
        start = self.advance().start
        iterator = self.expect(TokenKind.IDENTIFIER, expected="loop iterator name")
        self.expect(TokenKind.KEYWORD, "in")
        lower = self.expr()
        self.expect(TokenKind.OPERATOR, "..")
        upper = self.expr()
        step = 1
        if self.at(TokenKind.KEYWORD, "step"):
            self.advance()
            step_tok = self.expect(TokenKind.INTEGER, expected="integer step")
            step = int(step_tok.text)
        body, end = self.block()
        return For(iterator.text, lower, upper, step, body, start=start, end=end)

    def if_stmt(self) -> If:
        start = self.advance().start
        conditions = [self.comparison()]
        while self.at(TokenKind.OPERATOR, "&&"):
            self.advance()
            conditions.append(self.comparison())
        then_body, end = self.block()
        else_body: list[Stmt] = []
        if self.at(TokenKind.KEYWORD, "else"):
            self.advance()
            else_body, end = self.block()
        return If(conditions, then_body, else_body, start=start, end=end)

    def access_stmt(self) -> Access:
        kind_tok = self.advance()
        name = self.expect(TokenKind.IDENTIFIER, expected="array name")
        self.expect(TokenKind.DELIMITER, "[")
        subscripts = self.expr_list()
        self.expect(TokenKind.DELIMITER, "]")
        end = self.expect(TokenKind.DELIMITER, ";").end
        return Access(kind_tok.text, name.text, subscripts, start=kind_tok.start, end=end)

    def block(self) -> tuple[list[Stmt], int]:
        self.expect(TokenKind.DELIMITER, "{")
        stmts: list[Stmt] = []
        while not self.at(TokenKind.DELIMITER, "}"):
            if self.peek() is None:
                raise self.error("unterminated block, expected `}`", expected="`}`")
            stmts.append(self.stmt())
        end = self.advance().end
        return stmts, end

    def comparison(self) -> Comparison:
        left = self.expr()
        tok = self.peek()
        if tok is None or tok.kind is not TokenKind.OPERATOR or tok.text not in CMP_OPS:
            raise self.error("expected a comparison operator", expected="one of < <= == >= >")
        self.advance()
        right = self.expr()
        return Comparison(left, tok.text, right, left.start, right.end)

    def expr_list(self) -> list[Expr]:
        exprs = [self.expr()]
        while self.at(TokenKind.DELIMITER, ","):
            self.advance()
            exprs.append(self.expr())
        return exprs

    def expr(self) -> Expr:
        left = self.mul_expr()
        while self.at(TokenKind.OPERATOR, "+") or self.at(TokenKind.OPERATOR, "-"):
            op = self.advance().text
            right = self.mul_expr()
            cls = Add if op == "+" else Sub
            left = cls(left, right, start=left.start, end=right.end)
        return left

    def mul_expr(self) -> Expr:
        left = self.unary()
        while self.at(TokenKind.OPERATOR, "*") or self.at(TokenKind.OPERATOR, "/"):
            op = self.advance().text
            right = self.unary()
            if op == "*":
                left = Mul(left, right, start=left.start, end=right.end)
            else:
                left = FloorDiv(left, right, start=left.start, end=right.end)
        return left

    def unary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise self.error("expected an expression", expected="expression")
        if tok.kind is TokenKind.OPERATOR and tok.text == "-":
            self.advance()
            child = self.unary()
            return Neg(child, start=tok.start, end=child.end)
        if tok.kind is TokenKind.DELIMITER and tok.text == "(":
            self.advance()
            inner = self.expr()
            close = self.expect(TokenKind.DELIMITER, ")")
            inner.start, inner.end = tok.start, close.end
            return inner
        if tok.kind is TokenKind.INTEGER:
            self.advance()
            return Const(int(tok.text), start=tok.start, end=tok.end)
        if tok.kind is TokenKind.IDENTIFIER:
            self.advance()
            return Var(tok.text, start=tok.start, end=tok.end)
        raise self.error("expected an expression", expected="expression")


def parse(tokens: list[Token], source_len: int = 0) -> Program:
    """Parse a token list into a :class:`Program`."""
    if not source_len and tokens:
        source_len = tokens[-1].end
    return _Parser(tokens, source_len).program()


def parse_source(source: str) -> Program:
    """Tokenize and parse DSL source text."""
    return parse(tokenize(source), len(source))
