"""Exact real algebraic numbers and elements of Z[xi].

An AlgebraicReal is (integer polynomial, isolating rational interval).  The
polynomial is reduced to the irreducible factor vanishing at the root, which
makes zero-testing of Z[xi]-elements a finite symbolic reduction and
guarantees that every sign determination terminates.

Refinement is bisection (correctness baseline) with interval-Newton
acceleration validated by containment; enclosures only ever shrink, and the
best one seen so far is cached.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence, Tuple, Union

import sympy

from . import polys
from .errors import (ConstantPolynomial, MultipleRootsInInterval,
                     NoRootInInterval, PrecisionError, RationalInput)
from .intervals import Interval

Rat = Union[int, Fraction]


def _factor_candidates(poly: Sequence[int]) -> list:
    """Irreducible integer factors of a squarefree integer polynomial."""
    t = sympy.Symbol("T")
    expr = sum(int(c) * t ** i for i, c in enumerate(poly))
    _, factors = sympy.factor_list(sympy.Poly(expr, t, domain="ZZ"))
    out = []
    for f, _mult in factors:
        coeffs = [int(c) for c in reversed(sympy.Poly(f, t).all_coeffs())]
        out.append(polys.primitive(coeffs))
    return out


class AlgebraicReal:
    """A real algebraic number with certified, nested interval refinement."""

    __slots__ = ("poly", "lo", "hi", "_chain", "_enclosure", "_deriv")

    def __init__(self, poly: Sequence[int], lo: Rat, hi: Rat, _validated=False):
        self.poly = polys.trim(tuple(int(c) for c in poly))
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._chain = None
        self._deriv = polys.derivative(self.poly)
        self._enclosure = Interval(self.lo, self.hi)
        if not _validated:
            raise ValueError("use make_algebraic() to construct validated values")

    # -- construction ------------------------------------------------------

    @property
    def degree(self) -> int:
        return polys.degree(self.poly)

    def is_rational(self) -> bool:
        return self.degree == 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise RationalInput("not a rational number")
        c0, c1 = self.poly
        return Fraction(-c0, c1)

    # -- refinement --------------------------------------------------------

    def _sturm_chain(self):
        if self._chain is None:
            self._chain = polys.sturm_sequence(self.poly)
        return self._chain

    def enclosure(self) -> Interval:
        return self._enclosure

    def refine(self, width: Rat) -> Interval:
        """Certified enclosure of width <= `width`; nested across calls."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        iv = self._enclosure
        if iv.width <= width:
            return iv
        if self.is_rational():
            v = self.rational_value()
            self._enclosure = Interval(v, v)
            return self._enclosure
        lo, hi = iv.lo, iv.hi
        slo = _sign(polys.eval_at(self.poly, lo))
        shi = _sign(polys.eval_at(self.poly, hi))
        # Endpoints are never roots for an irreducible poly of degree > 1
        # on a rational interval, so the sign change is strict.
        assert slo != 0 and shi != 0 and slo != shi
        while hi - lo > width:
            nlo, nhi = self._newton_step(lo, hi, slo)
            if nhi - nlo < hi - lo:
                lo, hi = nlo, nhi
                continue
            mid = (lo + hi) / 2
            smid = _sign(polys.eval_at(self.poly, mid))
            if smid == 0:  # cannot happen for irreducible degree >= 2
                raise AssertionError("rational root of irreducible polynomial")
            if smid == slo:
                lo = mid
            else:
                hi = mid
        self._enclosure = Interval(lo, hi)
        return self._enclosure

    def _newton_step(self, lo: Fraction, hi: Fraction, slo: int):
        """One interval-Newton contraction, validated by containment: the
        result is intersected with [lo, hi], endpoints rounded outward to
        dyadic rationals.  Returns the input interval when not usable."""
        deriv_range = polys.eval_interval(self._deriv, Interval(lo, hi))
        if deriv_range.contains_zero():
            return lo, hi
        mid = (lo + hi) / 2
        fmid = Fraction(polys.eval_at(self.poly, mid))
        step = Interval.point(fmid) / deriv_range
        nlo = max(lo, mid - step.hi)
        nhi = min(hi, mid - step.lo)
        if nlo > nhi or nhi - nlo >= (hi - lo) / 2:
            return lo, hi
        # outward dyadic rounding keeps endpoint denominators powers of two
        gap = nhi - nlo
        k = (8 * gap.denominator // gap.numerator).bit_length() + 1
        scale = 2 ** k
        nlo = max(lo, Fraction(_floor_div(nlo.numerator * scale, nlo.denominator), scale))
        nhi = min(hi, Fraction(-_floor_div(-nhi.numerator * scale, nhi.denominator), scale))
        return nlo, nhi

    def refine_bits(self, bits: int) -> Interval:
        return self.refine(Fraction(1, 2 ** bits))

    # -- serialization (decimal-string integers, constant-first) -----------

    def to_json(self) -> dict:
        return {
            "poly": [str(c) for c in self.poly],
            "lo": _frac_str(self.lo),
            "hi": _frac_str(self.hi),
        }

    @staticmethod
    def from_json(data) -> "AlgebraicReal":
        if isinstance(data, str):
            data = json.loads(data)
        poly = [int(c) for c in data["poly"]]
        return make_algebraic(poly, (_parse_frac(data["lo"]), _parse_frac(data["hi"])))

    def __repr__(self):
        iv = self._enclosure
        approx = float(iv.mid)
        return f"AlgebraicReal(poly={list(self.poly)}, ~{approx:.6g})"


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _floor_div(a: int, b: int) -> int:
    return a // b


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


def make_algebraic(poly: Sequence[int], interval: Tuple[Rat, Rat]) -> AlgebraicReal:
    """Validated construction: takes the squarefree part, picks the
    irreducible factor with exactly one root in the interval, and certifies
    the count with a Sturm sequence."""
    p = polys.trim(tuple(int(c) for c in poly))
    if polys.degree(p) < 1:
        raise ConstantPolynomial(f"degree {polys.degree(p)} polynomial cannot define a number")
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if lo >= hi:
        raise ValueError("interval endpoints must satisfy lo < hi")
    sf = polys.squarefree_part(p)

    total = 0
    chosen = None
    for factor in _factor_candidates(sf):
        count = _roots_in_closed(factor, lo, hi)
        total += count
        if count:
            chosen = (factor, count)
    if total == 0:
        raise NoRootInInterval(f"no real root of {list(p)} in [{lo}, {hi}]")
    if total > 1 or chosen[1] > 1:
        raise MultipleRootsInInterval(
            f"{total} roots of {list(p)} in [{lo}, {hi}]; interval is not isolating")
    factor = chosen[0]

    if polys.degree(factor) == 1:
        root = Fraction(-factor[0], factor[1])
        return AlgebraicReal(factor, root, root, _validated=True)
    # shrink endpoints off any rational points where factor vanishes is not
    # needed (irreducible, degree >= 2), but make sure the sign change is
    # visible to bisection; Sturm guarantees a sign change once count == 1.
    assert _sign(polys.eval_at(factor, lo)) * _sign(polys.eval_at(factor, hi)) == -1
    return AlgebraicReal(factor, lo, hi, _validated=True)


def _roots_in_closed(factor: tuple, lo: Fraction, hi: Fraction) -> int:
    """Roots of an irreducible integer polynomial in the closed interval."""
    chain = polys.sturm_sequence(factor)
    count = polys.sturm_count(chain, lo, hi)  # roots in (lo, hi]
    if polys.eval_at(factor, lo) == 0:
        count += 1
    return count


def refine_enclosure(x: AlgebraicReal, width: Rat) -> Interval:
    """Module-level spelling of AlgebraicReal.refine."""
    return x.refine(width)


# --- Z[xi] ----------------------------------------------------------------

class XiPolynomial:
    """An element of Z[xi]: integer coefficients, constant term first.

    Plain `==` is equality in the polynomial ring (the right notion whenever
    deg(xi) exceeds the degree in play); `is_zero_at` / `eq_at` reduce modulo
    the defining polynomial first and decide equality of values.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = ()):
        self.coeffs = polys.trim(tuple(int(c) for c in coeffs))

    @staticmethod
    def constant(c: int) -> "XiPolynomial":
        return XiPolynomial((c,))

    @staticmethod
    def xi() -> "XiPolynomial":
        return XiPolynomial((0, 1))

    @property
    def degree(self) -> int:
        return polys.degree(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = XiPolynomial.constant(other)
        if not isinstance(other, XiPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other) -> "XiPolynomial":
        other = _as_xp(other)
        return XiPolynomial(polys.add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other) -> "XiPolynomial":
        return self + (-_as_xp(other))

    def __rsub__(self, other) -> "XiPolynomial":
        return _as_xp(other) + (-self)

    def __neg__(self) -> "XiPolynomial":
        return XiPolynomial(polys.neg(self.coeffs))

    def __mul__(self, other) -> "XiPolynomial":
        other = _as_xp(other)
        return XiPolynomial(polys.mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def reduce(self, xi: AlgebraicReal) -> tuple:
        """Coefficients (over Q) of the reduction mod defining_poly(xi)."""
        if self.degree < xi.degree:
            return self.coeffs
        return polys.poly_mod(self.coeffs, xi.poly)

    def is_zero_at(self, xi: AlgebraicReal) -> bool:
        return polys.is_zero(self.reduce(xi))

    def eq_at(self, other: "XiPolynomial", xi: AlgebraicReal) -> bool:
        return (self - other).is_zero_at(xi)

    def enclosure(self, xi: AlgebraicReal, width: Rat) -> Interval:
        """Certified enclosure of the value at xi, of width <= width."""
        width = Fraction(width)
        if self.is_zero():
            return Interval.point(0)
        bits = 64
        while True:
            iv = polys.eval_interval(self.coeffs, xi.refine_bits(bits))
            if iv.width <= width:
                return iv
            bits *= 2

    def sign_at(self, xi: AlgebraicReal) -> int:
        """Exact sign of the value at xi.  Terminates: symbolic zero-test
        first, then refinement is guaranteed to separate from 0."""
        reduced = self.reduce(xi)
        if polys.is_zero(reduced):
            return 0
        bits = 64
        for _ in range(64):
            iv = polys.eval_interval(self.coeffs, xi.refine_bits(bits))
            s = iv.sign()
            if s != 0:
                return s
            bits *= 2
        raise PrecisionError("sign determination did not converge")  # pragma: no cover

    def __repr__(self):
        return f"XiPolynomial({list(self.coeffs)})"


def _as_xp(v) -> XiPolynomial:
    if isinstance(v, XiPolynomial):
        return v
    if isinstance(v, int):
        return XiPolynomial.constant(v)
    raise TypeError(f"cannot coerce {type(v)} to XiPolynomial")


def sign_of_form(coeffs: Sequence[int], x: AlgebraicReal) -> int:
    """Exact sign of sum(c_i * x^i)."""
    return XiPolynomial(coeffs).sign_at(x)


def compare_abs_forms(f: XiPolynomial, g: XiPolynomial, xi: AlgebraicReal) -> int:
    """Exact comparison of |f(xi)| and |g(xi)|: -1, 0, +1."""
    sf = f.sign_at(xi)
    sg = g.sign_at(xi)
    if sf == 0:
        return 0 if sg == 0 else -1
    if sg == 0:
        return 1
    diff = sf * f - sg * g  # |f| - |g| as an element of Z[xi]
    return diff.sign_at(xi)


def abs_enclosure(f: XiPolynomial, xi: AlgebraicReal, width: Rat) -> Interval:
    return abs(f.enclosure(xi, width))
