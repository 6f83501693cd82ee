"""Dense univariate polynomial helpers over Z and Q.

Polynomials are tuples of coefficients, constant term first.  Integer
polynomials carry `int` coefficients; the Sturm machinery works over
`fractions.Fraction`.  Everything here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from .intervals import Interval

IntPoly = tuple # of int
Coeffs = Sequence[Union[int, Fraction]]


def trim(coeffs: Coeffs) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Coeffs) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(trim(p)) - 1


def is_zero(p: Coeffs) -> bool:
    return all(c == 0 for c in p)


def add(p: Coeffs, q: Coeffs) -> tuple:
    n = max(len(p), len(q))
    return trim(tuple((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                      for i in range(n)))


def neg(p: Coeffs) -> tuple:
    return tuple(-c for c in p)


def sub(p: Coeffs, q: Coeffs) -> tuple:
    return add(p, neg(q))


def mul(p: Coeffs, q: Coeffs) -> tuple:
    if is_zero(p) or is_zero(q):
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def scale(p: Coeffs, s) -> tuple:
    return trim(tuple(c * s for c in p))


def eval_at(p: Coeffs, x) -> Union[int, Fraction]:
    acc = 0
    for c in reversed(trim(p)):
        acc = acc * x + c
    return acc


def eval_interval(p: Coeffs, x: Interval) -> Interval:
    """Enclosure of p over the interval, by Horner in interval arithmetic."""
    acc = Interval.point(0)
    for c in reversed(trim(p)):
        acc = acc * x + c
    return acc


def derivative(p: Coeffs) -> tuple:
    return trim(tuple(i * p[i] for i in range(1, len(p))))


def content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, abs(c))
    return g


def primitive(p: Sequence[int]) -> tuple:
    """Primitive part with positive leading coefficient."""
    p = trim(p)
    if not p:
        return ()
    g = content(p)
    q = tuple(c // g for c in p)
    if q[-1] < 0:
        q = neg(q)
    return q


def divmod_frac(p: Coeffs, q: Coeffs):
    """Quotient and remainder over Q."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in trim(p)]
    quo = [Fraction(0)] * max(0, len(rem) - len(q) + 1)
    lead = Fraction(q[-1])
    while len(rem) >= len(q):
        c = rem[-1] / lead
        k = len(rem) - len(q)
        quo[k] = c
        for i in range(len(q)):
            rem[k + i] -= c * q[i]
        while rem and rem[-1] == 0:
            rem.pop()
    return trim(quo), trim(rem)


def poly_mod(p: Coeffs, q: Coeffs) -> tuple:
    return divmod_frac(p, q)[1]


def gcd_frac(p: Coeffs, q: Coeffs) -> tuple:
    """Monic gcd over Q (up to normalization); () for gcd of zeros."""
    a, b = trim(p), trim(q)
    while b:
        a, b = b, poly_mod(a, b)
    if not a:
        return ()
    lead = Fraction(a[-1])
    return trim(tuple(Fraction(c) / lead for c in a))


def squarefree_part(p: Sequence[int]) -> tuple:
    """Primitive squarefree part of an integer polynomial."""
    p = primitive(p)
    if degree(p) < 1:
        return p
    g = gcd_frac(p, derivative(p))
    if degree(g) < 1:
        return p
    quo, rem = divmod_frac(p, g)
    assert is_zero(rem)
    # clear denominators, renormalize
    den = 1
    for c in quo:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    return primitive(tuple(int(c * den) for c in quo))


def shift(p: Sequence[int], k: int) -> tuple:
    """p(T + k) for integer k, by synthetic Horner steps."""
    c = list(trim(p))
    if not c:
        return ()
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += k * c[j + 1]
    return trim(c)


# --- Sturm sequences and root counting ---

def sturm_sequence(p: Coeffs) -> list:
    """Standard Sturm chain p, p', -rem(...), over Q."""
    p0 = trim(tuple(Fraction(c) for c in p))
    chain = [p0]
    p1 = derivative(p0)
    if not is_zero(p1):
        chain.append(p1)
        while True:
            r = poly_mod(chain[-2], chain[-1])
            if is_zero(r):
                break
            chain.append(neg(r))
    return chain


def sign_variations(values: Sequence) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(chain: list, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] of the squarefree polynomial
    whose Sturm chain is given."""
    va = sign_variations([eval_at(q, a) for q in chain])
    vb = sign_variations([eval_at(q, b) for q in chain])
    return va - vb


def count_roots(p: Coeffs, a, b) -> int:
    return sturm_count(sturm_sequence(p), Fraction(a), Fraction(b))


# --- resultants ---

def _poly_matrix_det(m: list) -> tuple:
    """Determinant of a square matrix whose entries are integer polynomials
    (tuples), by cofactor expansion.  Sizes here never exceed 5."""
    n = len(m)
    if n == 1:
        return trim(m[0][0])
    det: tuple = ()
    for j in range(n):
        entry = m[0][j]
        if is_zero(entry):
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = mul(entry, _poly_matrix_det(minor))
        det = add(det, term) if j % 2 == 0 else sub(det, term)
    return det


def resultant_bivariate(p: list, q: list) -> tuple:
    """Res_y(p, q) for p, q given as polynomials in y whose coefficients are
    integer polynomials in T (constant-first in y).  Returns an integer
    polynomial in T: the Sylvester determinant."""
    p = [trim(c) for c in p]
    q = [trim(c) for c in q]
    while p and is_zero(p[-1]):
        p.pop()
    while q and is_zero(q[-1]):
        q.pop()
    dp, dq = len(p) - 1, len(q) - 1
    if dp < 0 or dq < 0:
        return ()
    n = dp + dq
    if n == 0:
        return (1,)
    rows = []
    for i in range(dq):
        row = [()] * n
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(dp):
        row = [()] * n
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    return _poly_matrix_det(rows)
