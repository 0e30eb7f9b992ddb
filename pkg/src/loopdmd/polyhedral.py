"""Polyhedral lowering: timestamp spaces, access maps, and enumeration.

A program lowers to a *timestamp space*: an integer point set whose
lexicographic order equals execution order. Every loop becomes an ordinal
dimension (counting iterations from 0 in steps of 1; the iterator value is
recovered as ``ordinal * step + lower``), every multi-statement block gets
a constant selector dimension placed at the block's depth, and conditionals
contribute guards (the else side of an n-way conjunction expands into n
disjoint alternatives so every branch stays conjunctive). Branches are
padded to a uniform dimensionality with zero-constrained dimensions.

The *access map* sends each timestamp to a data-space tuple: array id plus
subscripts padded to the maximum declared rank, with optional cache-line
and cache-set components derived from the last declared subscript.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from . import ast
from .errors import ResourceLimitError
from .semantics import ValidatedProgram

DEFAULT_ENUM_CAP = 10**7
ENUM_CAP_ENV_VAR = "LOOPDMD_ENUM_CAP"


def default_enumeration_cap() -> int:
    raw = os.environ.get(ENUM_CAP_ENV_VAR)
    return int(raw) if raw else DEFAULT_ENUM_CAP


# --- lowered expressions --------------------------------------------------


class OrdExpr:
    """Affine form over ordinal dimensions and parameters, plus floor terms.

    value = const + sum(coeff * ordinal_dim) + sum(coeff * param)
                  + sum(coeff * floor(inner / divisor))
    """

    __slots__ = ("const", "dims", "params", "floors")

    def __init__(
        self,
        const: int = 0,
        dims: dict[int, int] | None = None,
        params: dict[str, int] | None = None,
        floors: list[tuple[int, "OrdExpr", int]] | None = None,
    ):
        self.const = const
        self.dims = dims or {}
        self.params = params or {}
        self.floors = floors or []

    @staticmethod
    def constant(value: int) -> "OrdExpr":
        return OrdExpr(const=value)

    @staticmethod
    def dim(index: int) -> "OrdExpr":
        return OrdExpr(dims={index: 1})

    @staticmethod
    def param(name: str) -> "OrdExpr":
        return OrdExpr(params={name: 1})

    def add(self, other: "OrdExpr") -> "OrdExpr":
        dims = dict(self.dims)
        for k, v in other.dims.items():
            dims[k] = dims.get(k, 0) + v
        params = dict(self.params)
        for k, v in other.params.items():
            params[k] = params.get(k, 0) + v
        return OrdExpr(
            self.const + other.const,
            {k: v for k, v in dims.items() if v},
            {k: v for k, v in params.items() if v},
            self.floors + other.floors,
        )

    def scale(self, factor: int) -> "OrdExpr":
        if factor == 0:
            return OrdExpr()
        return OrdExpr(
            self.const * factor,
            {k: v * factor for k, v in self.dims.items()},
            {k: v * factor for k, v in self.params.items()},
            [(c * factor, e, d) for c, e, d in self.floors],
        )

    def sub(self, other: "OrdExpr") -> "OrdExpr":
        return self.add(other.scale(-1))

    def floordiv(self, divisor: int) -> "OrdExpr":
        if not self.dims and not self.params and not self.floors:
            return OrdExpr(self.const // divisor)
        return OrdExpr(floors=[(1, self, divisor)])

    def is_constant(self, value: int | None = None) -> bool:
        if self.dims or self.params or self.floors:
            return False
        return value is None or self.const == value

    def evaluate(self, point, binding: dict[str, int]) -> int:
        total = self.const
        for k, v in self.dims.items():
            total += v * point[k]
        for k, v in self.params.items():
            total += v * binding[k]
        for c, e, d in self.floors:
            total += c * (e.evaluate(point, binding) // d)
        return total

    def bind(self, binding: dict[str, int]) -> "BoundExpr":
        const = self.const + sum(v * binding[k] for k, v in self.params.items())
        return BoundExpr(
            const,
            list(self.dims.items()),
            [(c, e.bind(binding), d) for c, e, d in self.floors],
        )

    def render(self, dim_names: dict[int, str]) -> str:
        parts: list[str] = []
        for k in sorted(self.dims):
            parts.append(_term(self.dims[k], dim_names.get(k, f"o{k}")))
        for k in sorted(self.params):
            parts.append(_term(self.params[k], k))
        for c, e, d in self.floors:
            parts.append(_term(c, f"floor(({e.render(dim_names)}) / {d})"))
        if self.const or not parts:
            parts.append(str(self.const))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _term(coeff: int, name: str) -> str:
    if coeff == 1:
        return name
    if coeff == -1:
        return f"-{name}"
    return f"{coeff}*{name}"


class BoundExpr:
    """An :class:`OrdExpr` with parameters substituted; fast per-point eval."""

    __slots__ = ("const", "dims", "floors")

    def __init__(self, const: int, dims: list[tuple[int, int]], floors):
        self.const = const
        self.dims = dims
        self.floors = floors

    def evaluate(self, point) -> int:
        total = self.const
        for k, v in self.dims:
            total += v * point[k]
        for c, e, d in self.floors:
            total += c * (e.evaluate(point) // d)
        return total


# --- guards ----------------------------------------------------------------

GE0 = "ge0"
EQ0 = "eq0"


@dataclass(frozen=True)
class Guard:
    """Normalized affine condition: expr >= 0 or expr == 0."""

    expr: OrdExpr
    kind: str

    def holds(self, point, binding: dict[str, int]) -> bool:
        v = self.expr.evaluate(point, binding)
        return v == 0 if self.kind == EQ0 else v >= 0

    def render(self, dim_names: dict[int, str]) -> str:
        op = "=" if self.kind == EQ0 else ">="
        return f"{self.expr.render(dim_names)} {op} 0"


def _lower_comparison(left: OrdExpr, op: str, right: OrdExpr) -> Guard:
    if op == "<":
        return Guard(right.sub(left).add(OrdExpr.constant(-1)), GE0)
    if op == "<=":
        return Guard(right.sub(left), GE0)
    if op == "==":
        return Guard(left.sub(right), EQ0)
    if op == ">=":
        return Guard(left.sub(right), GE0)
    if op == ">":
        return Guard(left.sub(right).add(OrdExpr.constant(-1)), GE0)
    raise ValueError(f"unknown comparison operator {op!r}")


def _negate_comparison(left: OrdExpr, op: str, right: OrdExpr) -> list[Guard]:
    """Negation of one comparison, as disjoint guard alternatives."""
    flipped = {"<": ">=", "<=": ">", ">=": "<", ">": "<="}
    if op in flipped:
        return [_lower_comparison(left, flipped[op], right)]
    # not(a == b)  ->  a < b  |  a > b
    return [_lower_comparison(left, "<", right), _lower_comparison(left, ">", right)]


# --- lowered statement tree -------------------------------------------------


@dataclass(eq=False)
class Leaf:
    stmt_id: int
    path: str
    array_id: int
    kind: str
    subscripts: list[OrdExpr]
    label: str


@dataclass(eq=False)
class LoopNode:
    dim: int
    iterator: str
    lower: OrdExpr
    upper: OrdExpr
    step: int
    child: "TreeNode"

    def trip_count(self, point, binding) -> int:
        lo = self.lower.evaluate(point, binding)
        hi = self.upper.evaluate(point, binding)
        return max(0, -((lo - hi) // self.step))


@dataclass(eq=False)
class SelNode:
    dim: int
    children: list["TreeNode"]


@dataclass(eq=False)
class CondNode:
    alternatives: list[tuple[list[Guard], "TreeNode"]]


TreeNode = Leaf | LoopNode | SelNode | CondNode


@dataclass(frozen=True)
class DimSpec:
    """Summary of one timestamp dimension across branches."""

    index: int
    kinds: tuple[str, ...]  # e.g. ("loop i",) or ("selector(2)",) or both


class DataPoint(NamedTuple):
    """A point in data space; equality compares all present components."""

    array_id: int
    subscripts: tuple[int, ...]
    block_index: int | None
    set_index: int | None


# --- lowering ----------------------------------------------------------------


@dataclass
class Lowered:
    params: list[str]
    n_dims: int
    root: TreeNode | None
    leaves: list[Leaf]
    dim_kinds: dict[int, list[str]]
    max_rank: int

    def dims(self) -> list[DimSpec]:
        return [
            DimSpec(i, tuple(dict.fromkeys(self.dim_kinds.get(i, ["pad"]))))
            for i in range(self.n_dims)
        ]


class _Lowerer:
    def __init__(self, validated: ValidatedProgram):
        self.v = validated
        self.leaves: list[Leaf] = []
        self.dim_kinds: dict[int, list[str]] = {}

    def lower(self) -> Lowered:
        root, n_dims = self.block(self.v.program.body, 0, {}, "")
        return Lowered(
            params=list(self.v.params),
            n_dims=n_dims,
            root=root,
            leaves=self.leaves,
            dim_kinds=self.dim_kinds,
            max_rank=self.v.max_rank,
        )

    def note_dim(self, pos: int, kind: str) -> None:
        self.dim_kinds.setdefault(pos, []).append(kind)

    def expr(self, e: ast.Expr, env: dict[str, OrdExpr]) -> OrdExpr:
        if isinstance(e, ast.Const):
            return OrdExpr.constant(e.value)
        if isinstance(e, ast.Var):
            binding = self.v.binding_of(e)
            if binding.is_param:
                return OrdExpr.param(e.name)
            return env[e.name]
        if isinstance(e, ast.Neg):
            return self.expr(e.child, env).scale(-1)
        if isinstance(e, ast.Add):
            return self.expr(e.left, env).add(self.expr(e.right, env))
        if isinstance(e, ast.Sub):
            return self.expr(e.left, env).sub(self.expr(e.right, env))
        if isinstance(e, ast.Mul):
            k = ast.try_fold(e.left)
            if k is not None:
                return self.expr(e.right, env).scale(k)
            k = ast.try_fold(e.right)
            if k is None:
                raise ValueError("non-affine product survived validation")
            return self.expr(e.left, env).scale(k)
        if isinstance(e, ast.FloorDiv):
            div = ast.try_fold(e.divisor)
            if div is None or div <= 0:
                raise ValueError("non-constant divisor survived validation")
            return self.expr(e.left, env).floordiv(div)
        raise TypeError(f"unknown expression {e!r}")

    def block(
        self, stmts: list[ast.Stmt], pos: int, env: dict[str, OrdExpr], path: str
    ) -> tuple[TreeNode | None, int]:
        if not stmts:
            return None, 0
        if len(stmts) == 1:
            return self.stmt(stmts[0], pos, env, _join(path, 0))
        children: list[TreeNode | None] = []
        length = 0
        for i, s in enumerate(stmts):
            node, sub_len = self.stmt(s, pos + 1, env, _join(path, i))
            children.append(node)
            length = max(length, sub_len)
        if all(c is None for c in children):
            return None, 0
        self.note_dim(pos, f"selector({len(stmts)})")
        # Statements with no accesses still occupy a selector slot so that
        # sibling indices match source order; empty slots never emit points.
        kept = [c if c is not None else CondNode([]) for c in children]
        return SelNode(pos, kept), 1 + length

    def stmt(
        self, s: ast.Stmt, pos: int, env: dict[str, OrdExpr], path: str
    ) -> tuple[TreeNode | None, int]:
        if isinstance(s, ast.Access):
            stmt_id = len(self.leaves)
            subs = [self.expr(e, env) for e in s.subscripts]
            label = f"{s.kind} {s.array}[" + ", ".join(ast.render_expr(e) for e in s.subscripts) + "]"
            leaf = Leaf(stmt_id, path, self.v.array_of(s), s.kind, subs, label)
            self.leaves.append(leaf)
            return leaf, 0
        if isinstance(s, ast.For):
            lower = self.expr(s.lower, env)
            upper = self.expr(s.upper, env)
            iter_expr = OrdExpr.dim(pos).scale(s.step).add(lower)
            child_env = dict(env)
            child_env[s.iterator] = iter_expr
            child, child_len = self.block(s.body, pos + 1, child_env, path)
            if child is None:
                return None, 0
            self.note_dim(pos, f"loop {s.iterator}")
            return LoopNode(pos, s.iterator, lower, upper, s.step, child), 1 + child_len
        if isinstance(s, ast.If):
            conds = [
                (self.expr(c.left, env), c.op, self.expr(c.right, env)) for c in s.conditions
            ]
            then_node, then_len = self.block(s.then_body, pos, env, path + ".t")
            else_node, else_len = self.block(s.else_body, pos, env, path + ".e")
            alternatives: list[tuple[list[Guard], TreeNode]] = []
            if then_node is not None:
                alternatives.append(([_lower_comparison(*c) for c in conds], then_node))
            if else_node is not None:
                # Complement of (c1 & ... & cn) as disjoint conjunctive pieces:
                # (!c1), (c1 & !c2), ..., (c1 & ... & c_{n-1} & !cn).
                for k, ck in enumerate(conds):
                    prefix = [_lower_comparison(*c) for c in conds[:k]]
                    for neg in _negate_comparison(*ck):
                        alternatives.append((prefix + [neg], else_node))
            if not alternatives:
                return None, 0
            return CondNode(alternatives), max(then_len, else_len)
        raise TypeError(f"unknown statement {s!r}")


def _join(path: str, index: int) -> str:
    return f"{path}.{index}" if path else str(index)


def lower_program(validated: ValidatedProgram) -> Lowered:
    return _Lowerer(validated).lower()


# --- timestamp space ---------------------------------------------------------


@dataclass
class TimestampSpace:
    """Union of conjunctive branches over ordinal + selector dimensions."""

    lowered: Lowered

    @property
    def params(self) -> list[str]:
        return self.lowered.params

    @property
    def n_dims(self) -> int:
        return self.lowered.n_dims

    def dims(self) -> list[DimSpec]:
        return self.lowered.dims()

    def points(self, binding: dict[str, int], cap: int | None = None) -> Iterator[tuple[int, ...]]:
        for point, _leaf in _walk(self.lowered, binding, cap):
            yield point

    def contains(self, point: tuple[int, ...], binding: dict[str, int]) -> bool:
        return _resolve(self.lowered, point, binding) is not None

    def dump(self) -> str:
        return dump_space(self)


def build_timestamp_space(validated: ValidatedProgram) -> TimestampSpace:
    return TimestampSpace(lower_program(validated))


def _check_binding(params: list[str], binding: dict[str, int]) -> None:
    for p in params:
        if p not in binding:
            raise ValueError(f"binding missing parameter {p!r}")
        if binding[p] < 0:
            raise ValueError(f"parameter {p!r} must be non-negative, got {binding[p]}")


def _walk(
    lowered: Lowered, binding: dict[str, int], cap: int | None
) -> Iterator[tuple[tuple[int, ...], Leaf]]:
    """Yield (point, leaf) for all member points in lexicographic order."""
    _check_binding(lowered.params, binding)
    if lowered.root is None:
        return
    limit = cap if cap is not None else default_enumeration_cap()
    buf = [0] * lowered.n_dims
    count = 0

    def rec(node: TreeNode) -> Iterator[tuple[tuple[int, ...], Leaf]]:
        nonlocal count
        if isinstance(node, Leaf):
            count += 1
            if count > limit:
                raise ResourceLimitError(
                    f"enumeration exceeded cap of {limit} timestamp points"
                )
            yield tuple(buf), node
        elif isinstance(node, LoopNode):
            trip = node.trip_count(buf, binding)
            for o in range(trip):
                buf[node.dim] = o
                yield from rec(node.child)
            buf[node.dim] = 0
        elif isinstance(node, SelNode):
            for idx, child in enumerate(node.children):
                buf[node.dim] = idx
                yield from rec(child)
            buf[node.dim] = 0
        elif isinstance(node, CondNode):
            for guards, child in node.alternatives:
                if all(g.holds(buf, binding) for g in guards):
                    yield from rec(child)
        else:
            raise TypeError(f"unknown node {node!r}")

    yield from rec(lowered.root)


def _resolve(
    lowered: Lowered, point: tuple[int, ...], binding: dict[str, int]
) -> Leaf | None:
    """Find the access statement selected by ``point``, or None."""
    if lowered.root is None or len(point) != lowered.n_dims:
        return None
    touched: set[int] = set()
    node: TreeNode | None = lowered.root
    while node is not None:
        if isinstance(node, Leaf):
            for i, v in enumerate(point):
                if i not in touched and v != 0:
                    return None
            return node
        if isinstance(node, LoopNode):
            o = point[node.dim]
            if not 0 <= o < node.trip_count(point, binding):
                return None
            touched.add(node.dim)
            node = node.child
        elif isinstance(node, SelNode):
            idx = point[node.dim]
            if not 0 <= idx < len(node.children):
                return None
            touched.add(node.dim)
            node = node.children[idx]
        elif isinstance(node, CondNode):
            node = next(
                (
                    child
                    for guards, child in node.alternatives
                    if all(g.holds(point, binding) for g in guards)
                ),
                None,
            )
        else:
            raise TypeError(f"unknown node {node!r}")
    return None


def enumerate_points(
    space: TimestampSpace, binding: dict[str, int], cap: int | None = None
) -> Iterator[tuple[int, ...]]:
    """All member points of ``space`` in strictly increasing lexicographic order."""
    return space.points(binding, cap)


# --- access map ----------------------------------------------------------------


@dataclass
class AccessMap:
    """Affine map from timestamp points to data-space tuples."""

    lowered: Lowered
    block_size: int = 1
    num_sets: int = 1

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        if self.num_sets < 1:
            raise ValueError("num_sets must be >= 1")

    def data_point(self, leaf: Leaf, point, binding: dict[str, int]) -> DataPoint:
        subs = [e.evaluate(point, binding) for e in leaf.subscripts]
        return self.transform(leaf.array_id, subs)

    def transform(self, array_id: int, subs: list[int]) -> DataPoint:
        """Apply blocking/set tagging and tail padding to raw subscript values."""
        block = None
        set_idx = None
        if subs:
            last = subs[-1]
            if self.block_size > 1:
                block = last // self.block_size
                subs = subs[:-1] + [block]
            if self.num_sets > 1:
                set_idx = last % self.num_sets
        padded = tuple(subs) + (0,) * (self.lowered.max_rank - len(subs))
        return DataPoint(array_id, padded, block, set_idx)

    def dump(self) -> str:
        return dump_access_map(self)


def build_access_map(
    validated: ValidatedProgram, block_size: int = 1, num_sets: int = 1
) -> AccessMap:
    return AccessMap(lower_program(validated), block_size, num_sets)


def evaluate_access(
    amap: AccessMap, point: tuple[int, ...], binding: dict[str, int]
) -> DataPoint:
    """Data point accessed at ``point``; raises if no statement matches."""
    leaf = _resolve(amap.lowered, point, binding)
    if leaf is None:
        raise RuntimeError(f"no access statement matches timestamp point {point}")
    return amap.data_point(leaf, point, binding)


def walk_accesses(
    amap: AccessMap, binding: dict[str, int], cap: int | None = None
) -> Iterator[tuple[tuple[int, ...], int, DataPoint]]:
    """Yield (timestamp, statement id, data point) in execution order."""
    for point, leaf in _walk(amap.lowered, binding, cap):
        yield point, leaf.stmt_id, amap.data_point(leaf, point, binding)


# --- debug dumps -----------------------------------------------------------------


def _branch_constraints(lowered: Lowered) -> list[tuple[str, dict[int, str], str]]:
    """Per leaf-branch: (path, dim variable names, constraint string)."""
    out: list[tuple[str, dict[int, str], str]] = []

    def rec(node: TreeNode | None, names: dict[int, str], constraints: list[str]) -> None:
        if node is None:
            return
        if isinstance(node, Leaf):
            out.append((node.path, dict(names), " ; ".join(constraints) or "true"))
            return
        if isinstance(node, LoopNode):
            plain = node.lower.is_constant(0) and node.step == 1
            name = node.iterator if plain else f"o{node.dim}"
            names = dict(names)
            names[node.dim] = name
            span = node.upper.sub(node.lower).render(names)
            bound = span if node.step == 1 else f"ceil(({span}) / {node.step})"
            if not node.lower.is_constant(0) and node.step == 1:
                bound = f"({bound})" if " " in bound else bound
            rec(node.child, names, constraints + [f"0 <= {name} < {bound}"])
            return
        if isinstance(node, SelNode):
            for idx, child in enumerate(node.children):
                rec(child, names, constraints + [f"d{node.dim} = {idx}"])
            return
        if isinstance(node, CondNode):
            for guards, child in node.alternatives:
                rec(child, names, constraints + [g.render(names) for g in guards])
            return
        raise TypeError(f"unknown node {node!r}")

    rec(lowered.root, {}, [])
    return out


def dump_space(space: TimestampSpace) -> str:
    lw = space.lowered
    lines = [f"params: {', '.join(lw.params) if lw.params else '(none)'}", f"dims: {lw.n_dims}"]
    for spec in lw.dims():
        lines.append(f"  d{spec.index}: " + " | ".join(spec.kinds))
    for path, _names, constraints in _branch_constraints(lw):
        lines.append(f"branch {path}: {constraints}")
    return "\n".join(lines) + "\n"


def dump_access_map(amap: AccessMap) -> str:
    lw = amap.lowered
    lines = [
        f"access map (B={amap.block_size}, S={amap.num_sets}, rank={lw.max_rank})",
        "# rank-deficient subscripts shown with leading zero padding;"
        " stored data points pad at the tail",
    ]
    branch_names = {path: names for path, names, _c in _branch_constraints(lw)}
    for leaf in lw.leaves:
        names = branch_names.get(leaf.path, {})
        point_parts = []
        for i in range(lw.n_dims):
            if i in names:
                point_parts.append(names[i])
            else:
                point_parts.append(str(_selector_value(lw, leaf, i)))
        subs = [e.render(names) for e in leaf.subscripts]
        if amap.block_size > 1 and subs:
            subs[-1] = f"floor(({subs[-1]}) / {amap.block_size})"
        pad = ["0"] * (lw.max_rank - len(subs))
        tuple_parts = [str(leaf.array_id)] + pad + subs
        if amap.num_sets > 1 and leaf.subscripts:
            raw_last = leaf.subscripts[-1].render(names)
            tuple_parts.append(f"({raw_last}) mod {amap.num_sets}")
        lines.append(
            f"{leaf.path}: ({', '.join(point_parts)}) -> ({', '.join(tuple_parts)})"
            f"    # {leaf.label}"
        )
    return "\n".join(lines) + "\n"


def _selector_value(lowered: Lowered, leaf: Leaf, dim: int) -> int:
    """Constant coordinate of ``dim`` on the branch leading to ``leaf`` (0 if padded)."""

    def rec(node: TreeNode | None, value: int | None) -> int | None:
        if node is None:
            return None
        if node is leaf:
            return value if value is not None else 0
        if isinstance(node, Leaf):
            return None
        if isinstance(node, LoopNode):
            return rec(node.child, value)
        if isinstance(node, SelNode):
            for idx, child in enumerate(node.children):
                got = rec(child, idx if node.dim == dim else value)
                if got is not None:
                    return got
            return None
        if isinstance(node, CondNode):
            for _guards, child in node.alternatives:
                got = rec(child, value)
                if got is not None:
                    return got
            return None
        raise TypeError(f"unknown node {node!r}")

    got = rec(lowered.root, None)
    return got if got is not None else 0
