"""Exact quasi-polynomial fitting from sampled integer counts.

Counts of integer points in parametric polytopes are quasi-polynomials:
polynomials whose coefficients depend on parameter residues modulo fixed
periods. This backend recovers them by exact Lagrange interpolation over
rationals on a tensor grid, one polynomial piece per residue combination,
and rejects the fit unless every held-out sample matches exactly. It is a
self-contained substitute for a parametric counting library; the
``fit`` entry point is the pluggable surface a library-backed counter
could implement instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import formula as fx
from .errors import FitFailure

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class Poly:
    """Multivariate polynomial over named parameters with rational coefficients."""

    params: tuple[str, ...]
    coeffs: tuple[tuple[Exponents, Fraction], ...]  # sorted, zero-free

    @staticmethod
    def make(params: Sequence[str], coeffs: Mapping[Exponents, Fraction]) -> "Poly":
        clean = {e: Fraction(c) for e, c in coeffs.items() if c != 0}
        return Poly(tuple(params), tuple(sorted(clean.items())))

    @staticmethod
    def constant(params: Sequence[str], value: int | Fraction) -> "Poly":
        zero = (0,) * len(params)
        return Poly.make(params, {zero: Fraction(value)})

    @staticmethod
    def variable(params: Sequence[str], name: str) -> "Poly":
        e = [0] * len(params)
        e[list(params).index(name)] = 1
        return Poly.make(params, {tuple(e): Fraction(1)})

    def as_dict(self) -> dict[Exponents, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        out = self.as_dict()
        for e, c in other.coeffs:
            out[e] = out.get(e, Fraction(0)) + c
        return Poly.make(self.params, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = self.as_dict()
        for e, c in other.coeffs:
            out[e] = out.get(e, Fraction(0)) - c
        return Poly.make(self.params, out)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly.make(self.params, out)

    def scale(self, k: int | Fraction) -> "Poly":
        return Poly.make(self.params, {e: c * k for e, c in self.coeffs})

    def evaluate(self, binding: Mapping[str, int]) -> Fraction:
        total = Fraction(0)
        for exps, coeff in self.coeffs:
            term = coeff
            for name, e in zip(self.params, exps):
                if e:
                    term *= Fraction(binding[name]) ** e
            total += term
        return total

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps, _ in self.coeffs)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.coeffs[0][1] if self.coeffs else Fraction(0)

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.coeffs), default=0)

    def to_formula(self) -> fx.FormulaExpr:
        terms = []
        for exps, coeff in self.coeffs:
            factors: list[fx.FormulaExpr] = [fx.rational(coeff)]
            for name, e in zip(self.params, exps):
                if e == 1:
                    factors.append(fx.sym(name))
                elif e > 1:
                    factors.append(fx.Pow(fx.sym(name), e))
            terms.append(fx.mul(*factors))
        return fx.simplify(fx.add(*terms))


def _lagrange_basis(params: Sequence[str], name: str, points: Sequence[int], at: int) -> Poly:
    """Polynomial in ``name`` that is 1 at ``at`` and 0 at the other points."""
    x = Poly.variable(params, name)
    out = Poly.constant(params, 1)
    for other in points:
        if other != at:
            out = out * (x - Poly.constant(params, other)).scale(Fraction(1, at - other))
    return out


def interpolate_grid(
    params: Sequence[str],
    axis_values: Sequence[Sequence[int]],
    lookup: Mapping[tuple[int, ...], Fraction],
) -> Poly:
    """Unique interpolant on the tensor grid of ``axis_values``.

    Per-axis degree is len(values)-1; every grid combination must be present
    in ``lookup``.
    """

    def rec(level: int, prefix: tuple[int, ...]) -> Poly:
        if level == len(params):
            if prefix not in lookup:
                raise ValueError(f"sample grid incomplete: missing binding {prefix}")
            return Poly.constant(params, lookup[prefix])
        total = Poly.make(params, {})
        for v in axis_values[level]:
            part = rec(level + 1, prefix + (v,))
            total = total + part * _lagrange_basis(params, params[level], axis_values[level], v)
        return total

    return rec(0, ())


@dataclass(frozen=True)
class QuasiPoly:
    """Per-residue polynomial pieces; evaluation is exact over rationals."""

    params: tuple[str, ...]
    periods: tuple[int, ...]
    pieces: tuple[tuple[tuple[int, ...], Poly], ...]  # residue combo -> piece

    @staticmethod
    def make(
        params: Sequence[str], periods: Sequence[int], pieces: Mapping[tuple[int, ...], Poly]
    ) -> "QuasiPoly":
        return QuasiPoly(tuple(params), tuple(periods), tuple(sorted(pieces.items())))

    @staticmethod
    def constant(params: Sequence[str], value: int | Fraction) -> "QuasiPoly":
        periods = (1,) * len(params)
        zero = (0,) * len(params)
        return QuasiPoly.make(params, periods, {zero: Poly.constant(params, value)})

    def piece_map(self) -> dict[tuple[int, ...], Poly]:
        return dict(self.pieces)

    def residues_of(self, binding: Mapping[str, int]) -> tuple[int, ...]:
        return tuple(binding[p] % m for p, m in zip(self.params, self.periods))

    def evaluate(self, binding: Mapping[str, int]) -> Fraction:
        combo = self.residues_of(binding)
        pieces = self.piece_map()
        if combo not in pieces:
            raise ValueError(f"no fitted piece for residue combination {combo}")
        return pieces[combo].evaluate(binding)

    def is_uniform(self) -> bool:
        polys = {poly.coeffs for _, poly in self.pieces}
        return len(polys) <= 1

    def is_constant(self) -> bool:
        return all(poly.is_constant() for _, poly in self.pieces) and (
            len({poly.coeffs for _, poly in self.pieces}) <= 1
        )

    def __sub__(self, other: "QuasiPoly") -> "QuasiPoly":
        if self.params != other.params:
            raise ValueError("parameter mismatch")
        periods = tuple(_lcm(a, b) for a, b in zip(self.periods, other.periods))
        pieces: dict[tuple[int, ...], Poly] = {}
        for combo in itertools.product(*(range(m) for m in periods)):
            mine = self._piece_for(combo)
            theirs = other._piece_for(combo)
            if mine is None or theirs is None:
                continue
            pieces[combo] = mine - theirs
        return QuasiPoly.make(self.params, periods, pieces)

    def _piece_for(self, combo: tuple[int, ...]) -> Poly | None:
        reduced = tuple(c % m for c, m in zip(combo, self.periods))
        return self.piece_map().get(reduced)

    def to_formula(self) -> fx.FormulaExpr:
        if not self.pieces:
            return fx.raw("<no value>", r"\text{no value}")
        if self.is_uniform():
            return self.pieces[0][1].to_formula()
        parts_plain = []
        parts_latex = []
        for combo, poly in self.pieces:
            conds = [
                f"{p} mod {m} = {r}"
                for p, m, r in zip(self.params, self.periods, combo)
                if m > 1
            ]
            cond_plain = " and ".join(conds) if conds else "otherwise"
            body = poly.to_formula()
            parts_plain.append(f"{cond_plain}: {fx.render_plain(body)}")
            conds_lx = [
                f"{p} \\equiv {r} \\pmod{{{m}}}"
                for p, m, r in zip(self.params, self.periods, combo)
                if m > 1
            ]
            cond_latex = " \\wedge ".join(conds_lx) if conds_lx else "\\text{otherwise}"
            parts_latex.append(f"{fx.render_latex(body)} & {cond_latex}")
        plain = "{" + "; ".join(parts_plain) + "}"
        latex = "\\begin{cases}" + " \\\\ ".join(parts_latex) + "\\end{cases}"
        return fx.raw(plain, latex)


def _lcm(a: int, b: int) -> int:
    return math.lcm(a, b)


def fit(
    samples: Iterable[tuple[Mapping[str, int], int | Fraction]],
    degree_bound: int,
    period: int | Sequence[int],
    params: Sequence[str],
) -> QuasiPoly:
    """Fit a quasi-polynomial through exact integer samples.

    Per residue combination, the first ``degree_bound + 1`` distinct values
    on each axis form the interpolation grid; every remaining sample is a
    held-out check. Any mismatch raises :class:`FitFailure`: the data is not
    quasi-polynomial at this degree/period.
    """
    params = tuple(params)
    periods = (period,) * len(params) if isinstance(period, int) else tuple(period)
    if len(periods) != len(params):
        raise ValueError("one period per parameter required")

    by_combo: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}
    for binding, value in samples:
        combo = tuple(binding[p] % m for p, m in zip(params, periods))
        key = tuple(binding[p] for p in params)
        group = by_combo.setdefault(combo, {})
        value = Fraction(value)
        if key in group and group[key] != value:
            raise FitFailure(f"inconsistent samples at binding {key}")
        group[key] = value

    if not by_combo:
        raise ValueError("no samples provided")

    pieces: dict[tuple[int, ...], Poly] = {}
    for combo in sorted(by_combo):
        group = by_combo[combo]
        axis_values = []
        for i in range(len(params)):
            values = sorted({key[i] for key in group})
            axis_values.append(values[: degree_bound + 1])
        poly = interpolate_grid(params, axis_values, group)
        for key, value in sorted(group.items()):
            got = poly.evaluate(dict(zip(params, key)))
            if got != value:
                raise FitFailure(
                    f"fit-failure: degree {degree_bound}, periods {periods}: "
                    f"binding {dict(zip(params, key))} expected {value}, interpolant gives {got}"
                )
        pieces[combo] = poly
    return QuasiPoly.make(params, periods, pieces)
