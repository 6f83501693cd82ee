"""Exact interval arithmetic over the rationals.

Endpoints are `fractions.Fraction`, so every operation here is exact: an
Interval produced by arithmetic on enclosures is itself a true enclosure,
with no rounding step anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rat = Union[int, Fraction]


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(v: Rat) -> "Interval":
        f = Fraction(v)
        return Interval(f, f)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def mag(self) -> Fraction:
        """max |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    @property
    def mig(self) -> Fraction:
        """min |x| over the interval (0 if it contains 0)."""
        if self.contains_zero():
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def contains(self, v: Rat) -> bool:
        return self.lo <= v <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_subset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def sign(self) -> int:
        """+1 / -1 when the interval excludes 0, else 0 (undecided)."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    # -- arithmetic --

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Interval":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Interval":
        other = _coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = _coerce(other)
        if other.contains_zero():
            raise ZeroDivisionError("interval division by an interval containing 0")
        inv = Interval(1 / other.hi, 1 / other.lo)
        return self * inv

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other) / self

    def __pow__(self, k: int) -> "Interval":
        if k < 0:
            raise ValueError("negative powers: divide explicitly")
        if k == 0:
            return Interval.point(1)
        result = self
        for _ in range(k - 1):
            result = result * self
        if k % 2 == 0 and self.contains_zero():
            result = Interval(Fraction(0), result.hi)
        return result

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __repr__(self) -> str:
        return f"Interval({self.lo}, {self.hi})"


def _coerce(v) -> Interval:
    if isinstance(v, Interval):
        return v
    return Interval.point(v)


def imax(*ivs: Interval) -> Interval:
    """Enclosure of max(x_1, ..., x_k) for x_i in the given intervals."""
    return Interval(max(iv.lo for iv in ivs), max(iv.hi for iv in ivs))


def imin(*ivs: Interval) -> Interval:
    return Interval(min(iv.lo for iv in ivs), min(iv.hi for iv in ivs))


def decimal_string(value: Interval, digits: int) -> str:
    """Decimal expansion with `digits` significant digits, certified by the
    enclosure (truncated toward zero).  Raises PrecisionError if the interval
    is too wide to pin the digits.
    """
    from .errors import PrecisionError

    if value.contains_zero():
        if value.lo == value.hi == 0:
            return "0"
        raise PrecisionError("interval contains 0; cannot fix significant digits")
    neg = value.hi < 0
    iv = -value if neg else value
    # Smallest m with iv * 10^m >= 10^(digits-1); then N = floor(iv * 10^m)
    # has exactly `digits` digits.
    m = 0
    scale = Fraction(1)
    threshold = 10 ** (digits - 1)
    while iv.lo * scale < threshold:
        m += 1
        scale *= 10
    while iv.lo * scale >= 10 * threshold:
        m -= 1
        scale /= 10
    n_lo = int(iv.lo * scale)
    n_hi = int(iv.hi * scale)
    if n_lo != n_hi:
        raise PrecisionError("interval too wide for %d significant digits" % digits)
    digits_str = str(n_lo)
    if m <= 0:
        out = digits_str + "0" * (-m)
    elif m < len(digits_str):
        out = digits_str[:-m] + "." + digits_str[-m:]
    else:
        out = "0." + "0" * (m - len(digits_str)) + digits_str
    return ("-" if neg else "") + out
