"""Analysis reports: JSON documents and human-readable text.

The symbolic JSON document shape:

    {"program": {"params": [...]},
     "config": {...},
     "dmd": {"plain": ..., "latex": ...},
     "counts": {"n_total": F, "n_warm": F, "n_cold": F},
     "groups": [{"rd": F, "multiplicity": F, "scaling": bool,
                 "class": {"source": id, "pred": id, "carrier": int}, ...}],
     "diagnostics": []}

where F is {"plain": str, "latex": str}. Groups carry extra diagnostic
keys (boundary rank, statement labels, tabulated samples when no closed
form was found). Concrete runs replace dmd/counts/groups with a
"concrete" block holding exact integers.
"""

from __future__ import annotations

from typing import Any

from . import formula as fx
from .fitting import QuasiPoly
from .locality import ConcreteDistribution
from .semantics import ValidatedProgram
from .symbolic import DMDFormula, SymbolicDistribution


def _formula_json(expr: fx.FormulaExpr) -> dict:
    return fx.to_json(expr)


def _count_json(qp: QuasiPoly | None, fallback: str) -> dict:
    if qp is None:
        return _formula_json(fx.raw(f"<{fallback}: no closed form>", r"\text{no closed form}"))
    return _formula_json(qp.to_formula())


def build_symbolic_report(
    validated: ValidatedProgram,
    dist: SymbolicDistribution,
    dmd: DMDFormula,
    config: dict[str, Any],
) -> dict:
    groups = []
    for g in dist.groups:
        entry = {
            "rd": _formula_json(g.rd_formula()),
            "multiplicity": _formula_json(g.mult_formula()),
            "scaling": g.scaling,
            "class": {"source": g.key.source, "pred": g.key.pred, "carrier": g.key.carrier},
            "boundary": g.key.boundary,
            "source_label": g.source_label,
            "pred_label": g.pred_label,
            "fitted": g.fitted,
        }
        if not g.fitted:
            entry["fit_error"] = g.fit_error
            entry["samples"] = [
                {"binding": dict(zip(dist.params, key)), "rd": rd, "count": count}
                for key, rd, count in g.samples
            ]
        groups.append(entry)
    dmd_expr = dmd.to_expr()
    return {
        "program": {"params": list(validated.params)},
        "config": config,
        "dmd": _formula_json(dmd_expr),
        "counts": {
            "n_total": _count_json(dist.n_total, "n_total"),
            "n_warm": _count_json(dist.n_warm, "n_warm"),
            "n_cold": _count_json(dist.n_cold, "n_cold"),
        },
        "groups": groups,
        "diagnostics": [],
    }


def build_concrete_report(
    validated: ValidatedProgram,
    dist: ConcreteDistribution,
    binding: dict[str, int],
    config: dict[str, Any],
) -> dict:
    return {
        "program": {"params": list(validated.params)},
        "config": config,
        "binding": dict(binding),
        "concrete": dist.to_json(),
        "diagnostics": [],
    }


def render_symbolic_text(
    validated: ValidatedProgram,
    dist: SymbolicDistribution,
    dmd: DMDFormula,
) -> str:
    lines: list[str] = []
    dmd_expr = dmd.to_expr()
    lines.append("DMD formula")
    lines.append(f"  plain: {fx.render_plain(dmd_expr)}")
    lines.append(f"  latex: {fx.render_latex(dmd_expr)}")
    lines.append("")
    lines.append("access counts")
    for name, qp in (("n_total", dist.n_total), ("n_warm", dist.n_warm), ("n_cold", dist.n_cold)):
        text = fx.render_plain(qp.to_formula()) if qp is not None else "<no closed form>"
        lines.append(f"  {name} = {text}")
    lines.append("")
    lines.append(f"reuse-distance groups ({len(dist.groups)})")
    for g in dist.groups:
        tag = "scaling" if g.scaling else "diagnostic-only"
        lines.append(
            f"  [{tag}] {g.source_label} after {g.pred_label}"
            f" (carrier dim {g.key.carrier}, rank {g.key.boundary})"
        )
        lines.append(f"      rd = {fx.render_plain(g.rd_formula())}")
        lines.append(f"      multiplicity = {fx.render_plain(g.mult_formula())}")
        if not g.fitted:
            lines.append(f"      no closed form found: {g.fit_error}")
    if dist.count_fit_error:
        lines.append(f"  warning: {dist.count_fit_error}")
    lines.append("")
    return "\n".join(lines)


def render_concrete_text(
    validated: ValidatedProgram,
    dist: ConcreteDistribution,
    binding: dict[str, int],
) -> str:
    lines = [
        "concrete analysis at " + ", ".join(f"{k}={v}" for k, v in sorted(binding.items())),
        f"  n_total = {dist.n_total}",
        f"  n_warm  = {dist.n_warm}",
        f"  n_cold  = {dist.n_cold}",
        f"  DMD     = {dist.to_json()['dmd']:.6f}",
        "  rd distribution:",
    ]
    for rd, count in dist.groups:
        lines.append(f"    rd={rd}: {count}")
    lines.append("")
    return "\n".join(lines)
