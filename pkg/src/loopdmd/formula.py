"""Symbolic formula trees with simplification and plain/LaTeX rendering.

The variant set is deliberately small: rational constants, symbols, an
opaque raw escape hatch, n-ary sums and products, division, non-negative
integer powers, and square roots. ``simplify`` flattens nested sums and
products, collects like terms with rational coefficients, folds constants,
and extracts perfect-square monomial factors out of square roots (symbols
are treated as non-negative, which holds for loop parameters).

Rendering never reorders: identical trees render to identical strings.
Canonical ordering is applied by ``simplify`` only: constants lead products
and trail sums, other factors and terms sort deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import FormulaError


@dataclass(frozen=True)
class Rational:
    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator == 0:
            raise FormulaError("rational with zero denominator")
        f = Fraction(self.numerator, self.denominator)
        object.__setattr__(self, "numerator", f.numerator)
        object.__setattr__(self, "denominator", f.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Raw:
    plain: str
    latex: str


@dataclass(frozen=True)
class Add:
    children: tuple["FormulaExpr", ...]


@dataclass(frozen=True)
class Mul:
    children: tuple["FormulaExpr", ...]


@dataclass(frozen=True)
class Div:
    num: "FormulaExpr"
    den: "FormulaExpr"


@dataclass(frozen=True)
class Pow:
    base: "FormulaExpr"
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise FormulaError("negative exponent")


@dataclass(frozen=True)
class Sqrt:
    child: "FormulaExpr"


FormulaExpr = Union[Rational, Symbol, Raw, Add, Mul, Div, Pow, Sqrt]

ZERO = Rational(0)
ONE = Rational(1)


# --- constructors ---------------------------------------------------------


def rational(p: int | Fraction, q: int = 1) -> Rational:
    if isinstance(p, Fraction):
        f = p / q
        return Rational(f.numerator, f.denominator)
    return Rational(p, q)


def sym(name: str) -> Symbol:
    return Symbol(name)


def add(*children: FormulaExpr) -> FormulaExpr:
    if not children:
        return ZERO
    if len(children) == 1:
        return children[0]
    return Add(tuple(children))


def mul(*children: FormulaExpr) -> FormulaExpr:
    if not children:
        return ONE
    if len(children) == 1:
        return children[0]
    return Mul(tuple(children))


def sqrt(child: FormulaExpr) -> Sqrt:
    return Sqrt(child)


def raw(plain: str, latex: str | None = None) -> Raw:
    return Raw(plain, latex if latex is not None else plain)


# --- simplification -------------------------------------------------------


def simplify(expr: FormulaExpr) -> FormulaExpr:
    """Canonical form: flattened, collected, folded; idempotent."""
    return _canon(expr)


def _canon(e: FormulaExpr) -> FormulaExpr:
    if isinstance(e, (Rational, Symbol, Raw)):
        return e
    if isinstance(e, Add):
        return _canon_add([_canon(c) for c in e.children])
    if isinstance(e, Mul):
        return _canon_mul([_canon(c) for c in e.children])
    if isinstance(e, Div):
        num = _canon(e.num)
        den = _canon(e.den)
        if isinstance(den, Rational):
            if den.value == 0:
                raise FormulaError("division by zero constant")
            return _canon_mul([Rational(den.denominator, den.numerator), num])
        if num == ZERO:
            return ZERO
        return Div(num, den)
    if isinstance(e, Pow):
        base = _canon(e.base)
        if e.exponent == 0:
            return ONE
        if e.exponent == 1:
            return base
        if isinstance(base, Rational):
            return rational(base.value**e.exponent)
        if isinstance(base, Pow):
            return _canon(Pow(base.base, base.exponent * e.exponent))
        if isinstance(base, Mul):
            return _canon_mul([Pow(c, e.exponent) for c in base.children])
        return Pow(base, e.exponent)
    if isinstance(e, Sqrt):
        return _canon_sqrt(_canon(e.child))
    raise TypeError(f"not a formula expression: {e!r}")


def _split_coeff(e: FormulaExpr) -> tuple[Fraction, tuple[FormulaExpr, ...]]:
    """Split a canonical term into (rational coefficient, other factors)."""
    if isinstance(e, Rational):
        return e.value, ()
    if isinstance(e, Mul):
        coeff = Fraction(1)
        rest = []
        for c in e.children:
            if isinstance(c, Rational):
                coeff *= c.value
            else:
                rest.append(c)
        return coeff, tuple(rest)
    return Fraction(1), (e,)


def _canon_add(children: list[FormulaExpr]) -> FormulaExpr:
    flat: list[FormulaExpr] = []
    for c in children:
        if isinstance(c, Add):
            flat.extend(c.children)
        else:
            flat.append(c)
    constant = Fraction(0)
    collected: dict[str, tuple[Fraction, tuple[FormulaExpr, ...]]] = {}
    for term in flat:
        coeff, rest = _split_coeff(term)
        if not rest:
            constant += coeff
            continue
        key = " * ".join(render_plain(f) for f in rest)
        if key in collected:
            collected[key] = (collected[key][0] + coeff, rest)
        else:
            collected[key] = (coeff, rest)
    terms: list[tuple[float, str, FormulaExpr]] = []
    for key, (coeff, rest) in collected.items():
        if coeff == 0:
            continue
        factors = ([] if coeff == 1 else [rational(coeff)]) + list(rest)
        term = factors[0] if len(factors) == 1 else Mul(tuple(factors))
        terms.append((-_degree(term), key, term))
    terms.sort(key=lambda t: (t[0], t[1]))
    out = [t[2] for t in terms]
    if constant != 0 or not out:
        out.append(rational(constant))
    return out[0] if len(out) == 1 else Add(tuple(out))


def _canon_mul(children: list[FormulaExpr]) -> FormulaExpr:
    flat: list[FormulaExpr] = []
    for c in children:
        c = _canon(c) if isinstance(c, Pow) else c
        if isinstance(c, Mul):
            flat.extend(c.children)
        else:
            flat.append(c)
    coeff = Fraction(1)
    powers: dict[str, tuple[FormulaExpr, int]] = {}
    others: list[FormulaExpr] = []
    for f in flat:
        if isinstance(f, Rational):
            coeff *= f.value
            continue
        if isinstance(f, Pow):
            base, exp = f.base, f.exponent
        else:
            base, exp = f, 1
        if isinstance(base, (Div, Raw)):
            others.append(f)
            continue
        key = render_plain(base)
        if key in powers:
            powers[key] = (base, powers[key][1] + exp)
        else:
            powers[key] = (base, exp)
    if coeff == 0:
        return ZERO
    # sqrt(x)^2 folds back to x; refeed such folds through the canonicalizer
    # so constants merge into the coefficient and products flatten again.
    refold: list[FormulaExpr] = []
    plain_factors: list[FormulaExpr] = []
    for _key, (base, exp) in powers.items():
        if exp == 0:
            continue
        if isinstance(base, Sqrt) and exp > 1:
            whole, rem = divmod(exp, 2)
            refold.append(_canon(Pow(base.child, whole)))
            if rem:
                plain_factors.append(base)
        else:
            plain_factors.append(base if exp == 1 else Pow(base, exp))
    if refold:
        return _canon_mul([rational(coeff), *plain_factors, *refold, *others])
    factors: list[tuple[int, str, FormulaExpr]] = []
    for fexpr in plain_factors:
        base = fexpr.base if isinstance(fexpr, Pow) else fexpr
        rank = 2 if isinstance(base, Sqrt) else 1
        factors.append((rank, render_plain(fexpr), fexpr))
    for o in others:
        factors.append((3, render_plain(o), o))
    factors.sort(key=lambda t: (t[0], t[1]))
    out: list[FormulaExpr] = [t[2] for t in factors]
    if not out:
        return rational(coeff)
    if coeff != 1:
        out.insert(0, rational(coeff))
    return out[0] if len(out) == 1 else Mul(tuple(out))


def _square_free_split(n: int) -> tuple[int, int]:
    """n = s*s*f with f square-free; returns (s, f). Requires n >= 0."""
    if n == 0:
        return 0, 0
    s, f, d = 1, 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            s *= d
            n //= d * d
        if n % d == 0:
            f *= d
            n //= d
        d += 1
    return s, f * n


def _sqrt_rational_parts(r: Rational) -> tuple[Rational, Rational] | None:
    """sqrt(p/q) = outside * sqrt(inside) with inside a square-free integer."""
    if r.value <= 0:
        return None
    sn, fn = _square_free_split(r.numerator)
    sd, fd = _square_free_split(r.denominator)
    return Rational(sn, sd * fd), Rational(fn * fd)


def _canon_sqrt(child: FormulaExpr) -> FormulaExpr:
    if isinstance(child, Rational):
        if child.value == 0:
            return ZERO
        parts = _sqrt_rational_parts(child)
        if parts is None:
            return Sqrt(child)
        outside, inside = parts
        if inside == ONE:
            return outside
        return _canon_mul([outside, Sqrt(inside)])
    if isinstance(child, Pow):
        whole, rem = divmod(child.exponent, 2)
        parts_list: list[FormulaExpr] = []
        if whole:
            parts_list.append(Pow(child.base, whole) if whole > 1 else child.base)
        if rem:
            parts_list.append(Sqrt(child.base))
        return _canon_mul(parts_list) if parts_list else ONE
    if isinstance(child, Mul):
        outside: list[FormulaExpr] = []
        inside: list[FormulaExpr] = []
        for f in child.children:
            if isinstance(f, Rational):
                split = _sqrt_rational_parts(f)
                if split is None:
                    inside.append(f)
                    continue
                out_part, in_part = split
                if out_part != ONE:
                    outside.append(out_part)
                if in_part != ONE:
                    inside.append(in_part)
            elif isinstance(f, Pow):
                whole, rem = divmod(f.exponent, 2)
                if whole:
                    outside.append(Pow(f.base, whole) if whole > 1 else f.base)
                if rem:
                    inside.append(f.base)
            else:
                inside.append(f)
        if not outside:
            return Sqrt(child)
        if inside:
            outside.append(Sqrt(_canon_mul(inside)))
        return _canon_mul(outside)
    return Sqrt(child)


def _degree(e: FormulaExpr) -> float:
    """Rough total degree used only for deterministic term ordering."""
    if isinstance(e, Symbol):
        return 1.0
    if isinstance(e, (Rational, Raw)):
        return 0.0
    if isinstance(e, Add):
        return max((_degree(c) for c in e.children), default=0.0)
    if isinstance(e, Mul):
        return sum(_degree(c) for c in e.children)
    if isinstance(e, Div):
        return _degree(e.num) - _degree(e.den)
    if isinstance(e, Pow):
        return _degree(e.base) * e.exponent
    if isinstance(e, Sqrt):
        return _degree(e.child) / 2
    return 0.0


# --- rendering -------------------------------------------------------------

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_POW = 3
_PREC_ATOM = 4


def _neg_split(term: FormulaExpr) -> tuple[bool, FormulaExpr]:
    """Whether a term is negative-leading, and its positive counterpart."""
    if isinstance(term, Rational) and term.value < 0:
        return True, Rational(-term.numerator, term.denominator)
    if isinstance(term, Mul) and term.children and isinstance(term.children[0], Rational):
        head = term.children[0]
        if head.value < 0:
            flipped = Rational(-head.numerator, head.denominator)
            rest = term.children[1:]
            if flipped == ONE and rest:
                return True, rest[0] if len(rest) == 1 else Mul(rest)
            return True, Mul((flipped,) + rest)
    return False, term


def _render(e: FormulaExpr, latex: bool, prec: int) -> str:
    if isinstance(e, Rational):
        if e.denominator == 1:
            s = str(e.numerator)
            needs = prec >= _PREC_MUL and e.numerator < 0
            return f"({s})" if needs and not latex else s
        if latex:
            sign = "-" if e.numerator < 0 else ""
            return f"{sign}\\frac{{{abs(e.numerator)}}}{{{e.denominator}}}"
        s = f"{e.numerator}/{e.denominator}"
        return f"({s})" if prec >= _PREC_MUL else s
    if isinstance(e, Symbol):
        return e.name
    if isinstance(e, Raw):
        return e.latex if latex else e.plain
    if isinstance(e, Add):
        if not e.children:
            return "0"
        parts = [_render(e.children[0], latex, _PREC_ADD)]
        for term in e.children[1:]:
            negative, positive = _neg_split(term)
            op = " - " if negative else " + "
            parts.append(op + _render(positive, latex, _PREC_ADD + 1))
        s = "".join(parts)
        return f"({s})" if prec > _PREC_ADD else s
    if isinstance(e, Mul):
        if not e.children:
            return "1"
        sep = " \\cdot " if latex else " * "
        s = sep.join(_render(c, latex, _PREC_MUL) for c in e.children)
        return f"({s})" if prec > _PREC_MUL else s
    if isinstance(e, Div):
        if latex:
            return f"\\frac{{{_render(e.num, True, 0)}}}{{{_render(e.den, True, 0)}}}"
        s = f"{_render(e.num, False, _PREC_MUL)} / {_render(e.den, False, _PREC_POW)}"
        return f"({s})" if prec > _PREC_MUL else s
    if isinstance(e, Pow):
        base = _render(e.base, latex, _PREC_POW + 1)
        return f"{base}^{{{e.exponent}}}" if latex else f"{base}^{e.exponent}"
    if isinstance(e, Sqrt):
        inner = _render(e.child, latex, 0)
        return f"\\sqrt{{{inner}}}" if latex else f"sqrt({inner})"
    raise TypeError(f"not a formula expression: {e!r}")


def render_plain(expr: FormulaExpr) -> str:
    return _render(expr, latex=False, prec=0)


def render_latex(expr: FormulaExpr) -> str:
    return _render(expr, latex=True, prec=0)


def to_json(expr: FormulaExpr) -> dict:
    return {"plain": render_plain(expr), "latex": render_latex(expr)}


# --- evaluation -------------------------------------------------------------


def evaluate(expr: FormulaExpr, binding: Mapping[str, float]) -> float:
    """Double-precision evaluation with all symbols bound."""
    if isinstance(expr, Rational):
        return expr.numerator / expr.denominator
    if isinstance(expr, Symbol):
        if expr.name not in binding:
            raise FormulaError(f"unbound symbol {expr.name!r}")
        return float(binding[expr.name])
    if isinstance(expr, Raw):
        raise FormulaError("cannot evaluate an opaque raw formula")
    if isinstance(expr, Add):
        return sum(evaluate(c, binding) for c in expr.children)
    if isinstance(expr, Mul):
        out = 1.0
        for c in expr.children:
            out *= evaluate(c, binding)
        return out
    if isinstance(expr, Div):
        den = evaluate(expr.den, binding)
        if den == 0:
            raise FormulaError("division by zero")
        return evaluate(expr.num, binding) / den
    if isinstance(expr, Pow):
        return evaluate(expr.base, binding) ** expr.exponent
    if isinstance(expr, Sqrt):
        v = evaluate(expr.child, binding)
        if v < 0:
            raise FormulaError(f"square root of negative value {v}")
        return math.sqrt(v)
    raise TypeError(f"not a formula expression: {expr!r}")


def symbols_in(expr: FormulaExpr) -> set[str]:
    if isinstance(expr, Symbol):
        return {expr.name}
    if isinstance(expr, (Rational, Raw)):
        return set()
    if isinstance(expr, (Add, Mul)):
        out: set[str] = set()
        for c in expr.children:
            out |= symbols_in(c)
        return out
    if isinstance(expr, Div):
        return symbols_in(expr.num) | symbols_in(expr.den)
    if isinstance(expr, Pow):
        return symbols_in(expr.base)
    if isinstance(expr, Sqrt):
        return symbols_in(expr.child)
    raise TypeError(f"not a formula expression: {expr!r}")
