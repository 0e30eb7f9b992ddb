"""AST node types for the affine-loop DSL.

Nodes keep identity semantics (``eq=False``) so later passes can attach
side tables keyed by node; use :func:`structurally_equal` to compare trees.
Every node records the character span it was parsed from.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(eq=False)
class Node:
    pass


# --- affine expressions -------------------------------------------------


@dataclass(eq=False)
class Expr(Node):
    start: int = field(default=0, kw_only=True)
    end: int = field(default=0, kw_only=True)


@dataclass(eq=False)
class Const(Expr):
    value: int


@dataclass(eq=False)
class Var(Expr):
    name: str


@dataclass(eq=False)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(eq=False)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(eq=False)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(eq=False)
class FloorDiv(Expr):
    left: Expr
    divisor: Expr


@dataclass(eq=False)
class Neg(Expr):
    child: Expr


# --- statements ----------------------------------------------------------

CMP_OPS = ("<", "<=", "==", ">=", ">")


@dataclass(eq=False)
class Comparison(Node):
    left: Expr
    op: str
    right: Expr
    start: int = 0
    end: int = 0


@dataclass(eq=False)
class Stmt(Node):
    start: int = field(default=0, kw_only=True)
    end: int = field(default=0, kw_only=True)


@dataclass(eq=False)
class For(Stmt):
    iterator: str
    lower: Expr
    upper: Expr
    step: int
    body: list[Stmt]


@dataclass(eq=False)
class If(Stmt):
    conditions: list[Comparison]
    then_body: list[Stmt]
    else_body: list[Stmt]


ACCESS_KINDS = ("read", "write", "update")


@dataclass(eq=False)
class Access(Stmt):
    kind: str
    array: str
    subscripts: list[Expr]


@dataclass(eq=False)
class ArrayDecl(Node):
    name: str
    extents: list[Expr]
    start: int = 0
    end: int = 0


@dataclass(eq=False)
class Program(Node):
    params: list[str]
    arrays: list[ArrayDecl]
    body: list[Stmt]
    param_spans: list[tuple[int, int]] = field(default_factory=list)


# --- utilities -----------------------------------------------------------


def try_fold(expr: Expr) -> int | None:
    """Fold ``expr`` to an integer if it contains no variables, else None."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return None
    if isinstance(expr, Neg):
        v = try_fold(expr.child)
        return None if v is None else -v
    if isinstance(expr, (Add, Sub, Mul)):
        a = try_fold(expr.left)
        b = try_fold(expr.right)
        if a is None or b is None:
            return None
        if isinstance(expr, Add):
            return a + b
        if isinstance(expr, Sub):
            return a - b
        return a * b
    if isinstance(expr, FloorDiv):
        a = try_fold(expr.left)
        b = try_fold(expr.divisor)
        if a is None or b is None or b <= 0:
            return None
        return a // b
    raise TypeError(f"unknown expression node {expr!r}")


def expr_vars(expr: Expr) -> list[Var]:
    """All Var nodes in ``expr``, left to right."""
    out: list[Var] = []

    def walk(e: Expr) -> None:
        if isinstance(e, Var):
            out.append(e)
        elif isinstance(e, Neg):
            walk(e.child)
        elif isinstance(e, (Add, Sub, Mul)):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, FloorDiv):
            walk(e.left)
            walk(e.divisor)

    walk(expr)
    return out


def structurally_equal(a: Node | None, b: Node | None) -> bool:
    """Structural tree equality, ignoring spans."""
    if a is None or b is None:
        return a is b
    if type(a) is not type(b):
        return False
    if isinstance(a, Const):
        return a.value == b.value
    if isinstance(a, Var):
        return a.name == b.name
    if isinstance(a, Neg):
        return structurally_equal(a.child, b.child)
    if isinstance(a, (Add, Sub, Mul)):
        return structurally_equal(a.left, b.left) and structurally_equal(a.right, b.right)
    if isinstance(a, FloorDiv):
        return structurally_equal(a.left, b.left) and structurally_equal(a.divisor, b.divisor)
    if isinstance(a, Comparison):
        return (
            a.op == b.op
            and structurally_equal(a.left, b.left)
            and structurally_equal(a.right, b.right)
        )
    if isinstance(a, For):
        return (
            a.iterator == b.iterator
            and a.step == b.step
            and structurally_equal(a.lower, b.lower)
            and structurally_equal(a.upper, b.upper)
            and _lists_equal(a.body, b.body)
        )
    if isinstance(a, If):
        return (
            _lists_equal(a.conditions, b.conditions)
            and _lists_equal(a.then_body, b.then_body)
            and _lists_equal(a.else_body, b.else_body)
        )
    if isinstance(a, Access):
        return a.kind == b.kind and a.array == b.array and _lists_equal(a.subscripts, b.subscripts)
    if isinstance(a, ArrayDecl):
        return a.name == b.name and _lists_equal(a.extents, b.extents)
    if isinstance(a, Program):
        return (
            a.params == b.params
            and _lists_equal(a.arrays, b.arrays)
            and _lists_equal(a.body, b.body)
        )
    raise TypeError(f"unknown node type {type(a).__name__}")


def _lists_equal(xs: list, ys: list) -> bool:
    return len(xs) == len(ys) and all(structurally_equal(x, y) for x, y in zip(xs, ys))


# --- pretty printer ------------------------------------------------------

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_UNARY = 3


def render_expr(expr: Expr, parent_prec: int = 0) -> str:
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Neg):
        s = "-" + render_expr(expr.child, _PREC_UNARY)
        return f"({s})" if parent_prec > _PREC_MUL else s
    if isinstance(expr, (Add, Sub)):
        op = "+" if isinstance(expr, Add) else "-"
        s = f"{render_expr(expr.left, _PREC_ADD)} {op} {render_expr(expr.right, _PREC_ADD + 1)}"
        return f"({s})" if parent_prec > _PREC_ADD else s
    if isinstance(expr, Mul):
        s = f"{render_expr(expr.left, _PREC_MUL)} * {render_expr(expr.right, _PREC_MUL + 1)}"
        return f"({s})" if parent_prec > _PREC_MUL else s
    if isinstance(expr, FloorDiv):
        s = f"{render_expr(expr.left, _PREC_MUL)} / {render_expr(expr.divisor, _PREC_MUL + 1)}"
        return f"({s})" if parent_prec > _PREC_MUL else s
    raise TypeError(f"unknown expression node {expr!r}")


def render_program(program: Program) -> str:
    """Render a program back to DSL source (deterministic, reparseable)."""
    lines: list[str] = []
    if program.params:
        lines.append("params " + ", ".join(program.params) + ";")
    for arr in program.arrays:
        lines.append(f"array {arr.name}[" + ", ".join(render_expr(e) for e in arr.extents) + "];")
    if lines:
        lines.append("")
    _render_block(program.body, lines, 0)
    return "\n".join(lines) + "\n"


def _render_block(stmts: list[Stmt], lines: list[str], depth: int) -> None:
    pad = "  " * depth
    for stmt in stmts:
        if isinstance(stmt, Access):
            subs = ", ".join(render_expr(e) for e in stmt.subscripts)
            lines.append(f"{pad}{stmt.kind} {stmt.array}[{subs}];")
        elif isinstance(stmt, For):
            head = f"{pad}for {stmt.iterator} in {render_expr(stmt.lower)} .. {render_expr(stmt.upper)}"
            if stmt.step != 1:
                head += f" step {stmt.step}"
            lines.append(head + " {")
            _render_block(stmt.body, lines, depth + 1)
            lines.append(pad + "}")
        elif isinstance(stmt, If):
            conds = " && ".join(
                f"{render_expr(c.left)} {c.op} {render_expr(c.right)}" for c in stmt.conditions
            )
            lines.append(f"{pad}if {conds} {{")
            _render_block(stmt.then_body, lines, depth + 1)
            if stmt.else_body:
                lines.append(pad + "} else {")
                _render_block(stmt.else_body, lines, depth + 1)
            lines.append(pad + "}")
        else:
            raise TypeError(f"unknown statement {stmt!r}")
