"""Semantic validation of parsed programs.

Checks, all reported in one pass: unique parameter and array names,
subscript counts against declared ranks, no loop-variable shadowing,
positive loop steps, and the affine restriction (a multiplication needs a
constant operand, a division needs a positive constant divisor, variables
must be parameters or enclosing iterators, array extents may reference
parameters only).

On success every ``Var`` is annotated with its binding (parameter index or
loop depth) and every ``Access`` with its array index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ast
from .errors import Diagnostic, ValidationError


@dataclass(frozen=True)
class Binding:
    """Resolution of a variable: a program parameter or an enclosing loop."""

    kind: str  # "param" or "loop"
    index: int  # parameter index, or 0-based loop depth

    @property
    def is_param(self) -> bool:
        return self.kind == "param"


@dataclass
class ValidatedProgram:
    """A checked program plus the side tables produced by validation."""

    program: ast.Program
    params: list[str]
    arrays: list[ast.ArrayDecl]
    array_index: dict[int, int]  # id(Access) -> array number (declaration order)
    var_binding: dict[int, Binding]  # id(Var) -> binding
    access_count: int = 0
    max_loop_depth: int = 0
    floordiv_divisors: list[int] = field(default_factory=list)
    loop_steps: list[int] = field(default_factory=list)

    def binding_of(self, var: ast.Var) -> Binding:
        return self.var_binding[id(var)]

    def array_of(self, access: ast.Access) -> int:
        return self.array_index[id(access)]

    @property
    def max_rank(self) -> int:
        return max((len(a.extents) for a in self.arrays), default=0)


class _Validator:
    def __init__(self, program: ast.Program):
        self.program = program
        self.diags: list[Diagnostic] = []
        self.param_index = {}
        self.array_decl: dict[str, tuple[int, ast.ArrayDecl]] = {}
        self.var_binding: dict[int, Binding] = {}
        self.array_index: dict[int, int] = {}
        self.loop_stack: list[str] = []
        self.access_count = 0
        self.max_depth = 0
        self.divisors: list[int] = []
        self.steps: list[int] = []

    def report(self, category: str, message: str, start: int, end: int) -> None:
        self.diags.append(Diagnostic(category, message, start, end))

    def run(self) -> ValidatedProgram:
        prog = self.program
        spans = prog.param_spans or [(0, 0)] * len(prog.params)
        for i, (name, span) in enumerate(zip(prog.params, spans)):
            if name in self.param_index:
                self.report("duplicate-param", f"duplicate parameter name `{name}`", *span)
            else:
                self.param_index[name] = i

        for i, arr in enumerate(prog.arrays):
            if arr.name in self.array_decl:
                self.report("duplicate-array", f"duplicate array name `{arr.name}`", arr.start, arr.end)
                continue
            if arr.name in self.param_index:
                self.report(
                    "duplicate-array",
                    f"array name `{arr.name}` collides with a parameter",
                    arr.start,
                    arr.end,
                )
                continue
            self.array_decl[arr.name] = (i, arr)
            for ext in arr.extents:
                self.check_expr(ext, params_only=True)

        self.check_block(prog.body)

        if self.diags:
            raise ValidationError(self.diags)
        return ValidatedProgram(
            program=prog,
            params=list(prog.params),
            arrays=list(prog.arrays),
            array_index=self.array_index,
            var_binding=self.var_binding,
            access_count=self.access_count,
            max_loop_depth=self.max_depth,
            floordiv_divisors=self.divisors,
            loop_steps=self.steps,
        )

    def check_block(self, stmts: list[ast.Stmt]) -> None:
        for stmt in stmts:
            if isinstance(stmt, ast.Access):
                self.check_access(stmt)
            elif isinstance(stmt, ast.For):
                self.check_for(stmt)
            elif isinstance(stmt, ast.If):
                for cond in stmt.conditions:
                    self.check_expr(cond.left)
                    self.check_expr(cond.right)
                self.check_block(stmt.then_body)
                self.check_block(stmt.else_body)
            else:
                raise TypeError(f"unknown statement {stmt!r}")

    def check_for(self, stmt: ast.For) -> None:
        self.check_expr(stmt.lower)
        self.check_expr(stmt.upper)
        if stmt.step < 1:
            self.report("invalid-step", f"loop step must be positive, got {stmt.step}", stmt.start, stmt.end)
        else:
            self.steps.append(stmt.step)
        if stmt.iterator in self.param_index or stmt.iterator in self.loop_stack:
            self.report(
                "shadowing",
                f"loop variable `{stmt.iterator}` shadows an enclosing name",
                stmt.start,
                stmt.end,
            )
        self.loop_stack.append(stmt.iterator)
        self.max_depth = max(self.max_depth, len(self.loop_stack))
        self.check_block(stmt.body)
        self.loop_stack.pop()

    def check_access(self, stmt: ast.Access) -> None:
        self.access_count += 1
        decl = self.array_decl.get(stmt.array)
        if decl is None:
            self.report("unknown-array", f"access to undeclared array `{stmt.array}`", stmt.start, stmt.end)
        else:
            index, arr = decl
            self.array_index[id(stmt)] = index
            if len(stmt.subscripts) != len(arr.extents):
                self.report(
                    "rank-mismatch",
                    f"rank mismatch: expected {len(arr.extents)} subscripts, found {len(stmt.subscripts)}",
                    stmt.start,
                    stmt.end,
                )
        for sub in stmt.subscripts:
            self.check_expr(sub)

    # -- expressions -------------------------------------------------------

    def check_expr(self, expr: ast.Expr, params_only: bool = False) -> None:
        if isinstance(expr, ast.Const):
            return
        if isinstance(expr, ast.Var):
            self.resolve_var(expr, params_only)
            return
        if isinstance(expr, ast.Neg):
            self.check_expr(expr.child, params_only)
            return
        if isinstance(expr, (ast.Add, ast.Sub)):
            self.check_expr(expr.left, params_only)
            self.check_expr(expr.right, params_only)
            return
        if isinstance(expr, ast.Mul):
            self.check_expr(expr.left, params_only)
            self.check_expr(expr.right, params_only)
            if ast.try_fold(expr.left) is None and ast.try_fold(expr.right) is None:
                self.report(
                    "non-affine",
                    "non-affine: product of two variables",
                    expr.start,
                    expr.end,
                )
            return
        if isinstance(expr, ast.FloorDiv):
            self.check_expr(expr.left, params_only)
            div = ast.try_fold(expr.divisor)
            if div is None:
                self.report(
                    "non-affine",
                    "non-affine: divisor must be a constant",
                    expr.divisor.start,
                    expr.divisor.end,
                )
            elif div <= 0:
                self.report(
                    "non-affine",
                    f"divisor must be positive, got {div}",
                    expr.divisor.start,
                    expr.divisor.end,
                )
            else:
                self.divisors.append(div)
            return
        raise TypeError(f"unknown expression {expr!r}")

    def resolve_var(self, var: ast.Var, params_only: bool) -> None:
        if params_only:
            if var.name in self.param_index:
                self.var_binding[id(var)] = Binding("param", self.param_index[var.name])
            else:
                self.report(
                    "invalid-extent",
                    f"array extents may reference parameters only, found `{var.name}`",
                    var.start,
                    var.end,
                )
            return
        # Innermost loop wins, then parameters.
        for depth in range(len(self.loop_stack) - 1, -1, -1):
            if self.loop_stack[depth] == var.name:
                self.var_binding[id(var)] = Binding("loop", depth)
                return
        if var.name in self.param_index:
            self.var_binding[id(var)] = Binding("param", self.param_index[var.name])
            return
        self.report("unknown-variable", f"unknown variable `{var.name}`", var.start, var.end)


def validate(program: ast.Program) -> ValidatedProgram:
    """Validate ``program``; raises :class:`ValidationError` listing every violation."""
    return _Validator(program).run()


def check_source(source: str) -> ValidatedProgram:
    """Convenience: tokenize, parse, and validate DSL source."""
    from .parser import parse_source

    return validate(parse_source(source))
