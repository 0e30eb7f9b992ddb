"""Closed-form reuse-distance distributions and the symbolic DMD.

The engine runs the exact concrete analysis over a grid of parameter
bindings chosen large enough that boundary effects stabilize, groups warm
accesses into structural reuse classes (source statement, predecessor
statement, carrier dimension, and a boundary rank separating distinct rd
values inside one such class), fits each class's reuse distance and
multiplicity as quasi-polynomials, checks them exactly on held-out
bindings, and assembles the data-movement-distance formula from the
classes whose population keeps growing with the parameters. Classes that
are not quasi-polynomial at the attempted degree degrade to a tabulated
report instead of failing the analysis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import formula as fx
from .errors import FitFailure
from .fitting import QuasiPoly, fit
from .locality import ReuseRecord, analyze_trace_of
from .polyhedral import build_access_map
from .semantics import ValidatedProgram
from .symbolic_config import SymbolicConfig


@dataclass(frozen=True, order=True)
class ReuseClass:
    """Structural identity of one warm-access population."""

    source: int  # access-statement id of the reuse
    pred: int  # access-statement id of the immediate predecessor
    carrier: int  # first timestamp dimension where the two differ
    boundary: int  # rank among distinct rd values within (source, pred, carrier)


def classify(
    records: list[ReuseRecord], space=None
) -> dict[ReuseClass, tuple[int, int]]:
    """Group warm records into reuse classes for one concrete binding.

    Returns per class the (shared) rd value and the record count. Distinct
    rd values inside one (source, pred, carrier) population get boundary
    ranks in ascending rd order.
    """
    stmt_at: dict[tuple[int, ...], int] = {r.timestamp: r.stmt_id for r in records}
    triples: dict[tuple[int, int, int], dict[int, int]] = {}
    for r in records:
        if r.is_cold:
            continue
        pred_stmt = stmt_at[r.predecessor]
        carrier = _first_diff(r.predecessor, r.timestamp)
        counts = triples.setdefault((r.stmt_id, pred_stmt, carrier), {})
        counts[r.rd] = counts.get(r.rd, 0) + 1
    out: dict[ReuseClass, tuple[int, int]] = {}
    for (source, pred, carrier), counts in sorted(triples.items()):
        for rank, rd in enumerate(sorted(counts)):
            out[ReuseClass(source, pred, carrier, rank)] = (rd, counts[rd])
    return out


def _first_diff(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return len(a)


def _contains_sqrt(expr: fx.FormulaExpr) -> bool:
    if isinstance(expr, fx.Sqrt):
        return True
    if isinstance(expr, (fx.Add, fx.Mul)):
        return any(_contains_sqrt(c) for c in expr.children)
    if isinstance(expr, fx.Div):
        return _contains_sqrt(expr.num) or _contains_sqrt(expr.den)
    if isinstance(expr, fx.Pow):
        return _contains_sqrt(expr.base)
    return False


@dataclass
class SymbolicGroup:
    """One fitted (or tabulated) reuse class."""

    key: ReuseClass
    source_label: str
    pred_label: str
    rd_poly: QuasiPoly | None
    mult_poly: QuasiPoly | None
    scaling: bool
    present_on_grid: bool  # present at every grid binding of its residue combos
    samples: list[tuple[tuple[int, ...], int, int]]  # (param values, rd, count)
    fit_error: str | None = None

    @property
    def fitted(self) -> bool:
        return self.rd_poly is not None and self.mult_poly is not None

    def rd_formula(self) -> fx.FormulaExpr:
        return self.rd_poly.to_formula() if self.rd_poly else _tabulated(self.samples, 1)

    def mult_formula(self) -> fx.FormulaExpr:
        return self.mult_poly.to_formula() if self.mult_poly else _tabulated(self.samples, 2)


def _tabulated(samples: list[tuple[tuple[int, ...], int, int]], slot: int) -> fx.FormulaExpr:
    shown = ", ".join(f"{s[0]}->{s[slot]}" for s in samples[:4])
    more = ", ..." if len(samples) > 4 else ""
    return fx.raw(f"<no closed form: {shown}{more}>", r"\text{no closed form}")


@dataclass
class SymbolicDistribution:
    """Fitted distribution: groups plus total/warm/cold access-count formulas."""

    params: tuple[str, ...]
    groups: list[SymbolicGroup]
    n_total: QuasiPoly | None
    n_warm: QuasiPoly | None
    n_cold: QuasiPoly | None
    period: int
    degree: int
    grid: list[dict[str, int]]
    validation: list[dict[str, int]]
    stmt_labels: list[str] = field(default_factory=list)
    count_fit_error: str | None = None

    def scaling_groups(self) -> list[SymbolicGroup]:
        return [g for g in self.groups if g.scaling]


@dataclass
class DMDFormula:
    """DMD = cold term + sum of multiplicity * sqrt(rd) over scaling groups."""

    cold_term: fx.FormulaExpr
    warm_terms: list[tuple[fx.FormulaExpr, fx.FormulaExpr]]  # (multiplicity, sqrt arg)

    def to_expr(self) -> fx.FormulaExpr:
        poly_terms = [self.cold_term]
        sqrt_terms = []
        for mult, rd in self.warm_terms:
            term = fx.simplify(fx.mul(mult, fx.sqrt(rd)))
            # terms whose sqrt collapsed (perfect squares) join the cold
            # polynomial part; genuine sqrt terms keep the n_c + sum shape
            if _contains_sqrt(term):
                sqrt_terms.append(term)
            else:
                poly_terms.append(term)
        head = fx.simplify(fx.add(*poly_terms)) if len(poly_terms) > 1 else poly_terms[0]
        return fx.add(head, *sqrt_terms)

    def evaluate(self, binding: dict[str, int]) -> float:
        total = fx.evaluate(self.cold_term, binding)
        for mult, rd in self.warm_terms:
            total += fx.evaluate(mult, binding) * math.sqrt(fx.evaluate(rd, binding))
        return total


# --- sampling and fitting ---------------------------------------------------


def plan_grid(
    validated: ValidatedProgram,
    block_size: int,
    num_sets: int,
    config: SymbolicConfig,
) -> tuple[int, int, list[int], list[dict[str, int]], list[dict[str, int]]]:
    """Choose period, degree, axis values, fit grid, and validation bindings."""
    factors = [s for s in validated.loop_steps] + validated.floordiv_divisors
    factors += [block_size, num_sets]
    period = math.lcm(*factors) if factors else 1
    if config.period is not None:
        period = config.period
    depth = max(validated.max_loop_depth, 1)
    degree = config.degree_bound if config.degree_bound is not None else depth
    base = config.base if config.base is not None else max(4 * period, 2 * depth)
    per_residue = (
        config.points_per_residue if config.points_per_residue is not None else degree + 2
    )
    axis = [base + k for k in range(period * per_residue)]
    params = validated.params
    if params:
        grid = [dict(zip(params, combo)) for combo in itertools.product(axis, repeat=len(params))]
    else:
        grid = [{}]
    validation = []
    for k in range(config.validation_bindings):
        v = base + len(axis) + k
        validation.append({p: v for p in params})
    return period, degree, axis, grid, validation


def _fit_with_retry(samples, degree: int, period: int, params, retries: int) -> QuasiPoly:
    last: FitFailure | None = None
    for attempt in range(retries + 1):
        try:
            return fit(samples, degree + attempt, period, params)
        except FitFailure as e:
            last = e
    raise last if last is not None else FitFailure("fit failed")


def analyze_symbolic(
    validated: ValidatedProgram,
    block_size: int = 1,
    num_sets: int = 1,
    config: SymbolicConfig | None = None,
) -> SymbolicDistribution:
    """Fit the symbolic reuse-distance distribution of a validated program."""
    config = config or SymbolicConfig()
    params = tuple(validated.params)
    period, degree, _axis, grid, validation = plan_grid(
        validated, block_size, num_sets, config
    )
    amap = build_access_map(validated, block_size, num_sets)
    stmt_labels = [leaf.label for leaf in amap.lowered.leaves]

    grid_keys = [tuple(b[p] for p in params) for b in grid]
    all_bindings = grid + [v for v in validation if tuple(v[p] for p in params) not in set(grid_keys)]

    n_total_samples: list[tuple[dict[str, int], int]] = []
    n_warm_samples: list[tuple[dict[str, int], int]] = []
    per_class: dict[ReuseClass, dict[tuple[int, ...], tuple[int, int]]] = {}
    grid_set = set(grid_keys)

    for binding in all_bindings:
        records, dist = analyze_trace_of(amap, binding, cap=config.enumeration_cap)
        classes = classify(records)
        key = tuple(binding[p] for p in params)
        n_total_samples.append((binding, dist.n_total))
        n_warm_samples.append((binding, dist.n_warm))
        for ck, (rd, count) in classes.items():
            per_class.setdefault(ck, {})[key] = (rd, count)

    def fit_or_none(samples, what: str) -> tuple[QuasiPoly | None, str | None]:
        try:
            return _fit_with_retry(samples, degree, period, params, config.retries), None
        except FitFailure as e:
            return None, f"{what}: {e}"

    n_total, total_err = fit_or_none(n_total_samples, "n_total")
    n_warm, warm_err = fit_or_none(n_warm_samples, "n_warm")
    n_cold = n_total - n_warm if n_total is not None and n_warm is not None else None

    periods = (period,) * len(params)
    groups: list[SymbolicGroup] = []
    for ck in sorted(per_class):
        by_key = per_class[ck]
        combos_present = {
            tuple(v % m for v, m in zip(key, periods)) for key in by_key if key in grid_set
        }
        present_on_grid = bool(combos_present) and all(
            key in by_key
            for key in grid_keys
            if tuple(v % m for v, m in zip(key, periods)) in combos_present
        )

        mult_samples = []
        for binding in all_bindings:
            key = tuple(binding[p] for p in params)
            mult_samples.append((binding, by_key.get(key, (0, 0))[1]))
        rd_samples = [
            (dict(zip(params, key)), rd) for key, (rd, _count) in sorted(by_key.items())
        ]

        fit_error = None
        mult_poly, err = fit_or_none(mult_samples, "multiplicity")
        if err:
            fit_error = err
        rd_poly = None
        if present_on_grid:
            try:
                rd_poly = _fit_with_retry(rd_samples, degree, period, params, config.retries)
            except (FitFailure, ValueError) as e:
                rd_poly = None
                fit_error = fit_error or f"rd: {e}"
        else:
            fit_error = fit_error or "population absent at some grid bindings"

        samples_table = [
            (key, rd, count) for key, (rd, count) in sorted(by_key.items())
        ]
        group = SymbolicGroup(
            key=ck,
            source_label=stmt_labels[ck.source],
            pred_label=stmt_labels[ck.pred],
            rd_poly=rd_poly,
            mult_poly=mult_poly,
            scaling=False,
            present_on_grid=present_on_grid,
            samples=samples_table,
            fit_error=fit_error,
        )
        group.scaling = scaling_filter(group, params)
        groups.append(group)

    dist = SymbolicDistribution(
        params=params,
        groups=groups,
        n_total=n_total,
        n_warm=n_warm,
        n_cold=n_cold,
        period=period,
        degree=degree,
        grid=grid,
        validation=validation,
        stmt_labels=stmt_labels,
        count_fit_error=total_err or warm_err,
    )
    return dist


def scaling_filter(group: SymbolicGroup, params: tuple[str, ...]) -> bool:
    """Whether a group's population keeps growing with the parameters.

    True iff the population is present at every sampled grid binding of its
    residue combinations and its multiplicity is not constant there. Groups
    pinned to finitely many bindings, and constant boundary populations,
    are excluded from the DMD formula (but stay in the report).
    """
    if not group.present_on_grid:
        return False
    if group.mult_poly is not None:
        return not group.mult_poly.is_constant()
    counts = {count for _key, _rd, count in group.samples}
    return len(counts) > 1


def assemble_dmd(dist: SymbolicDistribution) -> DMDFormula:
    """Cold term plus one multiplicity*sqrt(rd) term per scaling fitted group.

    Terms with syntactically identical rd formulas merge by summing their
    multiplicities. Non-scaling and unfitted groups are omitted here; they
    remain in the distribution report.
    """
    if dist.n_cold is not None:
        cold = dist.n_cold.to_formula()
    else:
        cold = fx.raw("<n_cold: no closed form>", r"\text{no closed form}")
    merged: dict[str, tuple[fx.FormulaExpr, list[fx.FormulaExpr]]] = {}
    for g in dist.scaling_groups():
        if not g.fitted:
            continue
        rd_f = fx.simplify(g.rd_formula())
        mult_f = fx.simplify(g.mult_formula())
        if isinstance(rd_f, fx.Raw) or isinstance(mult_f, fx.Raw):
            # piecewise quasi-polynomials stay per-group; no merging
            key = f"group-{g.key.source}-{g.key.pred}-{g.key.carrier}-{g.key.boundary}"
            merged[key] = (rd_f, [mult_f])
            continue
        key = fx.render_plain(rd_f)
        if key in merged:
            merged[key][1].append(mult_f)
        else:
            merged[key] = (rd_f, [mult_f])
    warm_terms = []
    for key in sorted(merged):
        rd_f, mults = merged[key]
        mult_total = fx.simplify(fx.add(*mults))
        warm_terms.append((mult_total, rd_f))
    return DMDFormula(cold_term=cold, warm_terms=warm_terms)


def dmd_value_exact(dist: SymbolicDistribution, binding: dict[str, int]) -> float:
    """Numeric DMD at one binding from the fitted quasi-polynomials,
    restricted to cold plus scaling fitted groups."""
    if dist.n_cold is None:
        raise FitFailure("cold count has no closed form")
    total = float(dist.n_cold.evaluate(binding))
    for g in dist.scaling_groups():
        if not g.fitted:
            continue
        m = Fraction(g.mult_poly.evaluate(binding))
        r = Fraction(g.rd_poly.evaluate(binding))
        total += float(m) * math.sqrt(float(r))
    return total
