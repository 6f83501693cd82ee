"""Integer points, face maps, norms, L-values, determinants, wedge products,
lattice saturation, and heights of rational subspaces.

Points are plain tuples of ints.  The twisted difference of a point has
entries in Z[xi], so `delta` returns a tuple of XiPolynomial; applying it
again iterates the operator.  Grassmann coordinates follow the lexicographic
order on increasing index subsets, with minors taken with rows in argument
order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import List, Sequence, Tuple, Union

from .errors import (GradeOutOfRange, LengthTooShort, NotNormalized, NotSquare,
                     ZeroInput, ZeroPoint, ZeroSpan)
from .exactreal import AlgebraicReal, XiPolynomial, compare_abs_forms
from .intervals import Interval

IntVec = Tuple[int, ...]
XPVec = Tuple[XiPolynomial, ...]


def sup_norm(x: Sequence[int]) -> int:
    return max(abs(c) for c in x) if x else 0


def is_primitive(x: Sequence[int]) -> bool:
    g = 0
    for c in x:
        g = gcd(g, abs(c))
    return g == 1


def face_minus(x: Sequence) -> tuple:
    if len(x) < 2:
        raise LengthTooShort("face maps need length >= 2")
    return tuple(x[:-1])


def face_plus(x: Sequence) -> tuple:
    if len(x) < 2:
        raise LengthTooShort("face maps need length >= 2")
    return tuple(x[1:])


def _as_xp(v) -> XiPolynomial:
    if isinstance(v, XiPolynomial):
        return v
    return XiPolynomial.constant(int(v))


def delta(x: Sequence) -> XPVec:
    """Twisted difference x+ - xi*x-.  Accepts int or XiPolynomial entries,
    so delta(delta(x)) is the double iteration."""
    if len(x) < 2:
        raise LengthTooShort("delta needs length >= 2")
    xi = XiPolynomial.xi()
    return tuple(_as_xp(x[i + 1]) - xi * _as_xp(x[i]) for i in range(len(x) - 1))


def face_maps(x: Sequence[int]):
    """(x-, x+, delta x); delta commutes with the face maps by construction."""
    return face_minus(x), face_plus(x), delta(x)


def l_forms(x: Sequence[int], n: int = None) -> List[XiPolynomial]:
    """The forms x0*xi^i - x_i, i = 1..n, whose max modulus is L(x)."""
    if n is None:
        n = len(x) - 1
    x0 = int(x[0])
    out = []
    for i in range(1, n + 1):
        coeffs = [0] * (i + 1)
        coeffs[0] = -int(x[i])
        coeffs[i] = x0
        out.append(XiPolynomial(coeffs))
    return out


def l_argmax(x: Sequence[int], xi: AlgebraicReal) -> int:
    """Exact 1-based index attaining L(x); ties broken by smallest index.
    (For deg(xi) > n distinct-index ties cannot occur.)"""
    if all(c == 0 for c in x):
        raise ZeroPoint("L is only defined for nonzero points")
    forms = l_forms(x)
    best = 0
    for i in range(1, len(forms)):
        if compare_abs_forms(forms[i], forms[best], xi) > 0:
            best = i
    return best + 1


def l_value(x: Sequence[int], xi: AlgebraicReal, width) -> Tuple[Interval, int]:
    """Certified enclosure of L(x) of width <= width, plus exact argmax."""
    arg = l_argmax(x, xi)
    form = l_forms(x)[arg - 1]
    return abs(form.enclosure(xi, width)), arg


def compare_L(x: Sequence[int], y: Sequence[int], xi: AlgebraicReal) -> int:
    """Exact total-order comparison of L(x) and L(y): -1, 0, +1."""
    fx = l_forms(x)[l_argmax(x, xi) - 1]
    fy = l_forms(y)[l_argmax(y, xi) - 1]
    return compare_abs_forms(fx, fy, xi)


# --- determinants -----------------------------------------------------------

def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by cofactor expansion (sizes <= 4 here)."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquare("determinant of a non-square matrix")
    return _det_cofactor([list(map(int, r)) for r in rows])


def _det_cofactor(m) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        a = m[0][j]
        if a == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = a * _det_cofactor(minor)
        total += term if j % 2 == 0 else -term
    return total


def det_xp(rows: Sequence[Sequence]) -> XiPolynomial:
    """Determinant of a matrix with entries in Z[xi]."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquare("determinant of a non-square matrix")
    return _det_xp([[_as_xp(e) for e in r] for r in rows])


def _det_xp(m) -> XiPolynomial:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = XiPolynomial()
    for j in range(n):
        a = m[0][j]
        if a.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = a * _det_xp(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def laplace_delta_expand(rows: Sequence[Sequence[int]]):
    """Both sides of the column expansion of det through the twisted
    difference: lhs the plain determinant (as a constant of Z[xi]), rhs the
    alternating sum over omitted rows.  They agree identically in xi."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquare("expansion needs a square matrix")
    if n < 2:
        raise NotSquare("expansion needs n >= 1 (matrix size >= 2)")
    lhs = XiPolynomial.constant(det_int(rows))
    deltas = [delta(r) for r in rows]
    rhs = XiPolynomial()
    for i in range(n):
        c = int(rows[i][0])
        if c == 0:
            continue
        minor = deltas[:i] + deltas[i + 1:]
        term = XiPolynomial.constant(c) * _det_xp([list(r) for r in minor])
        rhs = rhs + term if i % 2 == 0 else rhs - term
    return lhs, rhs


# --- wedge products and heights ---------------------------------------------

@dataclass(frozen=True)
class MultiVector:
    """Grassmann coordinates of a wedge of integer vectors.

    Coordinates are indexed by increasing index subsets in lexicographic
    order; signs come from taking minors with rows in argument order.
    """
    grade: int
    dim: int
    coords: Tuple[int, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def norm(self) -> int:
        return sup_norm(self.coords)

    def content(self) -> int:
        g = 0
        for c in self.coords:
            g = gcd(g, abs(c))
        return g

    def is_primitive(self) -> bool:
        if self.is_zero():
            raise ZeroInput("zero multivector has no primitivity")
        return self.content() == 1

    def proportional(self, other: "MultiVector") -> bool:
        """True iff the two (nonzero) multivectors span the same line."""
        if self.grade != other.grade or self.dim != other.dim:
            return False
        a, b = self.coords, other.coords
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                if a[i] * b[j] != a[j] * b[i]:
                    return False
        return not (self.is_zero() ^ other.is_zero())

    def to_json(self) -> dict:
        return {"grade": self.grade, "coords": [str(c) for c in self.coords],
                "order": "lex-subsets"}


def wedge(points: Sequence[Sequence[int]]) -> MultiVector:
    """Wedge of p vectors of common length N: the p x p minors in
    lexicographic subset order.  Multilinear and alternating."""
    if not points:
        raise GradeOutOfRange("empty wedge")
    N = len(points[0])
    p = len(points)
    if any(len(v) != N for v in points):
        raise GradeOutOfRange("vectors of unequal length")
    if not (1 <= p <= N):
        raise GradeOutOfRange(f"grade {p} out of range for dimension {N}")
    rows = [list(map(int, v)) for v in points]
    coords = []
    for subset in combinations(range(N), p):
        minor = [[rows[i][j] for j in subset] for i in range(p)]
        coords.append(_det_cofactor(minor))
    return MultiVector(grade=p, dim=N, coords=tuple(coords))


def wedge_with_xi_vector(x: Sequence[int]) -> List[XiPolynomial]:
    """Grassmann coordinates of x ^ (1, xi, ..., xi^n) as elements of Z[xi],
    in the lex subset order: entry {i,j} is x_i xi^j - x_j xi^i.  The subset
    {0,j} coordinates are exactly the negated L-forms, so the sup of |coords|
    dominates L(x)."""
    n = len(x) - 1
    out = []
    for i, j in combinations(range(n + 1), 2):
        ci = [0] * (j + 1)
        ci[j] = int(x[i])
        cj = [0] * (i + 1)
        cj[i] = int(x[j])
        out.append(XiPolynomial(ci) - XiPolynomial(cj))
    return out


# --- Hermite normal form, kernels, saturation -------------------------------

def hnf(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row-style Hermite normal form basis of the lattice generated by the
    rows (zero rows dropped, pivots positive, entries above pivots reduced)."""
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        # gcd-eliminate below pivot_row in this column
        k = pivot_row
        while True:
            nz = [i for i in range(pivot_row, len(m)) if m[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][col]))
            m[pivot_row], m[i0] = m[i0], m[pivot_row]
            done = True
            for i in range(pivot_row + 1, len(m)):
                if m[i][col] != 0:
                    q = m[i][col] // m[pivot_row][col]
                    for j in range(ncols):
                        m[i][j] -= q * m[pivot_row][j]
                    if m[i][col] != 0:
                        done = False
            if done:
                break
        if pivot_row < len(m) and m[pivot_row][col] != 0:
            if m[pivot_row][col] < 0:
                m[pivot_row] = [-v for v in m[pivot_row]]
            piv = m[pivot_row][col]
            for i in range(pivot_row):
                q = m[i][col] // piv
                if q:
                    for j in range(ncols):
                        m[i][j] -= q * m[pivot_row][j]
            pivot_row += 1
        m = [r for r in m if any(r)]
        if pivot_row >= len(m):
            break
    return [r for r in m if any(r)]


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis of the lattice { x in Z^ncols : row . x = 0 for every row }."""
    rows = [list(map(int, r)) for r in rows]
    m = len(rows)
    if m == 0:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    # HNF of [ M^T | I ]: rows with vanishing first block carry kernel combos.
    aug = []
    for k in range(ncols):
        aug.append([rows[i][k] for i in range(m)] + [1 if j == k else 0 for j in range(ncols)])
    reduced = hnf(aug)
    kernel = [r[m:] for r in reduced if all(v == 0 for v in r[:m])]
    return kernel


def lattice_saturate(spanning: Sequence[Sequence[int]]) -> List[List[int]]:
    """Basis of V cap Z^N for V the rational span of the input vectors:
    the double integer-orthogonal-complement, via HNF kernels."""
    vs = [list(map(int, v)) for v in spanning if any(v)]
    if not vs:
        raise ZeroSpan("need at least one nonzero vector")
    N = len(vs[0])
    basis = hnf(vs)
    orth = integer_kernel(basis, N)
    sat = integer_kernel(orth, N)
    return sat


def subspace_height(spanning: Sequence[Sequence[int]]) -> int:
    """H(V) = sup-norm of the wedge of a basis of V cap Z^N; H({0}) = 1."""
    vs = [v for v in spanning if any(v)]
    if not vs:
        return 1
    basis = lattice_saturate(vs)
    return wedge(basis).norm()


def primitive_check(x) -> bool:
    """gcd of the coordinates is 1 (point or MultiVector)."""
    if isinstance(x, MultiVector):
        return x.is_primitive()
    if all(c == 0 for c in x):
        raise ZeroInput("zero input has no primitivity")
    return is_primitive(tuple(int(c) for c in x))


# --- Veronese factorization (unit 3-vectors) --------------------------------

def veronese_residual(y: Sequence[Fraction], rs: Tuple[Fraction, Fraction]) -> Fraction:
    """min over signs of || y -+ (r^2, rs, s^2) ||, exactly."""
    r, s = rs
    v = (r * r, r * s, s * s)
    d_minus = max(abs(Fraction(a) - b) for a, b in zip(y, v))
    d_plus = max(abs(Fraction(a) + b) for a, b in zip(y, v))
    return min(d_minus, d_plus)


def veronese_factor(y: Sequence, tol: Fraction = Fraction(0)) -> Tuple[Fraction, Fraction]:
    """For a unit 3-vector y, a unit pair (r, s) with
    min_± ||y ± (r^2, rs, s^2)|| <= 2 |det(y-, y+)|.

    Follows the constructive argument: permute so the first entry dominates
    the third in absolute value, flip the sign to make it nonnegative, take
    (r, s) = (1, middle entry), and undo the permutation.
    """
    if len(y) != 3:
        raise NotNormalized("need a 3-vector")
    a, b, c = (Fraction(v) for v in y)
    if abs(max(abs(a), abs(b), abs(c)) - 1) > tol:
        raise NotNormalized("input must have sup-norm 1")
    swapped = abs(a) < abs(c)
    if swapped:
        a, c = c, a
    if a < 0:
        a, b, c = -a, -b, -c
    r, s = Fraction(1), b
    if swapped:
        r, s = s, r
    return r, s


# --- derived per-xi constants for the size relations ------------------------

def xi_upper(xi: AlgebraicReal, bits: int = 64) -> Fraction:
    return xi.refine_bits(bits).hi


def norm_equivalence_constant(xi: AlgebraicReal, n: int) -> Fraction:
    """Rational K, valid for 0 < xi < 1, with
    L/K <= ||delta x|| <= K L  and  L <= ||x ^ (1,xi,..,xi^n)|| <= K L.
    A small margin keeps the certified comparisons strict."""
    hi = xi_upper(xi)
    return max(1 + hi, Fraction(n)) + Fraction(1, 64)


def det_remainder_constant(xi: AlgebraicReal, n: int) -> Fraction:
    """Rational c with |det - (-1)^n y_{n,0} det(delta-rows)| bounded by
    c * sum of the n partial products ||y_i|| L(y_0)...^i...L(y_n)."""
    hi = xi_upper(xi)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    return fact * (1 + hi) ** n
