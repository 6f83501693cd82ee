"""The determinant-built polynomial maps on Z^4 and their exact identities.

C is quadratic-in-first-argument bilinear into Z^2, E its trilinear
polarization, Psi- / Psi+ combine them into maps (Z^4)^3 -> Z^4, and Xi is
the quadrilinear combination with the self-reproducing identities.  All
evaluations are exact integer arithmetic; the asymptotic statements about
these maps are exposed here as exact residuals and derived-constant bounds,
never as assumptions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (DegenerateBasis, DiophlabError, FormMismatch,
                     NoNontrivialSolution, WrongLength)
from .exactreal import AlgebraicReal, XiPolynomial
from .latgeom import (delta, det_int, det_xp, face_minus, face_plus, l_forms,
                      sup_norm, wedge, xi_upper)

IntVec = Tuple[int, ...]
Pair = Tuple[int, int]


def _check4(*points):
    for p in points:
        if len(p) != 4:
            raise WrongLength(f"expected length 4, got {len(p)}")


def _det3(a, b, c) -> int:
    return det_int([a, b, c])


def det2(a: Sequence, b: Sequence):
    """Determinant of the 2x2 matrix with rows a, b."""
    return a[0] * b[1] - a[1] * b[0]


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _smul(s, u):
    return tuple(s * a for a in u)


def C_map(x: Sequence[int], y: Sequence[int]) -> Pair:
    """(det(x-, x+, y-), det(x-, x+, y+)).  Nonzero iff span(x-, x+) is a
    plane and span(y-, y+) is not inside it."""
    _check4(x, y)
    xm, xp = face_minus(x), face_plus(x)
    return (_det3(xm, xp, face_minus(y)), _det3(xm, xp, face_plus(y)))


def E_map(w: Sequence[int], x: Sequence[int], y: Sequence[int]) -> Pair:
    """The unique trilinear map symmetric in (w, x) with E(x,x,y) = 2C(x,y)."""
    _check4(w, x, y)
    wm, wp = face_minus(w), face_plus(w)
    xm, xp = face_minus(x), face_plus(x)
    ym, yp = face_minus(y), face_plus(y)
    return (_det3(wm, xp, ym) - _det3(wp, xm, ym),
            _det3(wm, xp, yp) - _det3(wp, xm, yp))


def psi_map(sign: int, x: Sequence[int], y: Sequence[int], z: Sequence[int]) -> IntVec:
    """Psi_eps(x,y,z) = C(y,z)^eps x + E(y,z,x)^eps y - C(y,x)^eps z,
    with eps = -1 selecting the first component and +1 the second."""
    _check4(x, y, z)
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    k = 0 if sign < 0 else 1
    cyz = C_map(y, z)[k]
    eyzx = E_map(y, z, x)[k]
    cyx = C_map(y, x)[k]
    return _add(_add(_smul(cyz, x), _smul(eyzx, y)), _smul(-cyx, z))


def psi_face_identity(sign: int, x, y, z) -> Tuple[IntVec, IntVec]:
    """Both sides of the face identity for Psi: for eps = -1,
    Psi-(x,y,z)^- = det(x-,y-,z+) y- - det(x-,y-,z-) y+, and the
    + analogue.  Returns (lhs, rhs) as integer 3-vectors."""
    psi = psi_map(sign, x, y, z)
    if sign < 0:
        lhs = face_minus(psi)
        a = _det3(face_minus(x), face_minus(y), face_plus(z))
        b = _det3(face_minus(x), face_minus(y), face_minus(z))
    else:
        lhs = face_plus(psi)
        a = _det3(face_plus(x), face_plus(y), face_plus(z))
        b = _det3(face_plus(x), face_plus(y), face_minus(z))
    rhs = _add(_smul(a, face_minus(y)), _smul(-b, face_plus(y)))
    return lhs, rhs


def xi_map(x: Sequence[int], y: Sequence[int], z: Sequence[int]) -> IntVec:
    """The quadrilinear-in-x map C(z,x)^- Psi+(y,x,z) - C(z,x)^+ Psi-(y,x,z).

    Also evaluated through its expanded form
      -det(E(x,z,y), C(z,x)) x - det(C(x,z), C(z,x)) y + det(C(x,y), C(z,x)) z;
    the two must agree exactly (a mathematical identity), otherwise
    FormMismatch signals an implementation bug.
    """
    _check4(x, y, z)
    czx = C_map(z, x)
    via_psi = _add(_smul(czx[0], psi_map(+1, y, x, z)),
                   _smul(-czx[1], psi_map(-1, y, x, z)))
    expanded = _add(_add(
        _smul(-det2(E_map(x, z, y), czx), x),
        _smul(-det2(C_map(x, z), czx), y)),
        _smul(det2(C_map(x, y), czx), z))
    if via_psi != expanded:
        raise FormMismatch(f"xi_map forms disagree: {via_psi} vs {expanded}")
    return via_psi


def contract_pair(C: Sequence[int], x: Sequence[int]) -> IntVec:
    """C+ x- - C- x+ : drops a point of Z^(n+1) to Z^n through a pair."""
    if len(C) != 2:
        raise WrongLength("pair must have length 2")
    if len(x) not in (2, 3, 4):
        raise WrongLength("point must have length 2, 3 or 4")
    return _add(_smul(C[1], face_minus(x)), _smul(-C[0], face_plus(x)))


def v_dim(x: Sequence[int]) -> int:
    """Dimension of span(x-, x+) in R^3."""
    _check4(x)
    xm, xp = face_minus(x), face_plus(x)
    if not any(xm) and not any(xp):
        return 0
    w = wedge([xm, xp])
    if w.is_zero():
        return 1
    # consistency: a plane must be visible to C against some unit vector
    units = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    if all(C_map(x, e) == (0, 0) for e in units):
        raise DiophlabError("v_dim: rank-2 wedge but C vanishes on all units")
    return 2


# --- pair helpers (PairZ2 behavior) -----------------------------------------

def pair_delta(C: Sequence[int]) -> XiPolynomial:
    """Delta C = C+ - xi C- as an element of Z[xi]."""
    if len(C) != 2:
        raise WrongLength("pair must have length 2")
    return XiPolynomial((C[1], -C[0]))


def pair_l_form(C: Sequence[int]) -> XiPolynomial:
    """The single form C0*xi - C1 whose modulus is L(C) (n = 1)."""
    if len(C) != 2:
        raise WrongLength("pair must have length 2")
    return XiPolynomial((-C[1], C[0]))


# --- exact expansion residuals (no O-constants assumed) ----------------------

def c_map_expansion(x: Sequence[int], y: Sequence[int]):
    """Exact column-expansion of C(x,y) through the twisted difference.

    Returns a dict with XiPolynomial values:
      minus_main  = x0 det(D2x, Dy-) + y0 det(Dx-, D2x)
      minus_rest  = C(x,y)^- - minus_main         (equals -Dx0 det(Dx-, Dy-))
      plus_main   = x0 det(D2x, Dy+) + y0 xi det(Dx-, D2x)
      plus_rest   = C(x,y)^+ - plus_main
      delta_main  = x0 det(D2x, D2y)
      delta_rest  = Delta C(x,y) - delta_main
    The `rest` parts are the exact remainders behind the quadratic-in-L
    estimates; they are returned, not bounded away.
    """
    _check4(x, y)
    c = C_map(x, y)
    dx, dy = delta(x), delta(y)
    d2x, d2y = delta(dx), delta(dy)
    dxm = dx[:-1]                      # (Dx)- = D(x-)
    dym, dyp = dy[:-1], dy[1:]
    x0 = XiPolynomial.constant(x[0])
    y0 = XiPolynomial.constant(y[0])
    xi = XiPolynomial.xi()
    det_dxm_d2x = det_xp([list(dxm), list(d2x)])
    minus_main = x0 * det_xp([list(d2x), list(dym)]) + y0 * det_dxm_d2x
    plus_main = x0 * det_xp([list(d2x), list(dyp)]) + y0 * xi * det_dxm_d2x
    delta_main = x0 * det_xp([list(d2x), list(d2y)])
    c_minus = XiPolynomial.constant(c[0])
    c_plus = XiPolynomial.constant(c[1])
    delta_c = pair_delta(c)
    return {
        "minus_main": minus_main,
        "minus_rest": c_minus - minus_main,
        "plus_main": plus_main,
        "plus_rest": c_plus - plus_main,
        "delta_main": delta_main,
        "delta_rest": delta_c - delta_main,
    }


def c_map_remainder_identities(x: Sequence[int], y: Sequence[int]) -> bool:
    """The closed forms of the expansion remainders, checked exactly:
      minus_rest = -Dx0 det(Dx-, Dy-)
      plus_rest  =  Dy0 det(Dx-, D2x) - Dx0 det(Dx-, Dy+)
      delta_rest =  plus_rest - xi * minus_rest
    """
    parts = c_map_expansion(x, y)
    dx, dy = delta(x), delta(y)
    dxm = list(dx[:-1])
    dym, dyp = list(dy[:-1]), list(dy[1:])
    d2x = list(delta(dx))
    xi = XiPolynomial.xi()
    m = -dx[0] * det_xp([dxm, dym])
    p = dy[0] * det_xp([dxm, d2x]) - dx[0] * det_xp([dxm, dyp])
    ok = (parts["minus_rest"] == m and parts["plus_rest"] == p
          and parts["delta_rest"] == p - xi * m)
    return ok


# --- derived constants for the size bounds ----------------------------------

def det3_estimate_constant(xi: AlgebraicReal) -> Fraction:
    """Rational c with |det(u,v,w)| <= c * (||u|| L(v) L(w) + ||v|| L(u) L(w)
    + ||w|| L(u) L(v)) for u,v,w in R^3, valid for 0 < xi < 1."""
    hi = xi_upper(xi)
    return 2 * (1 + hi) ** 2


def psi_size_constant(xi: AlgebraicReal) -> Fraction:
    """Rational K for the Psi size bounds under the L/||.|| ordering
    hypothesis:  L(Psi) <= K ||z|| L(x) L(y)^2  and
    ||Psi|| <= K (||y||^2 L(x) L(z) + ||z|| L(x) L(y)^2)."""
    hi = xi_upper(xi)
    c5 = det3_estimate_constant(xi)
    # four delta-terms, each 3 c5 (1+xi)^3 ||y3|| L(y1) L(y2) L(y4), then
    # L <= (1 + xi + xi^2) ||delta||; the norm bound reuses the same c5.
    face = (1 + hi) ** 3
    k_l = 3 * (4 * 3 * c5 * face)
    k_norm = 3 * c5 * face + k_l     # |psi^eps| term + L(psi) correction
    return max(k_l, k_norm) + 1


def contract_size_constant(xi: AlgebraicReal) -> Fraction:
    """Rational K' with L(contract_pair(C,x)) <= K' ||C|| L(x) and
    ||contract_pair(C,x)|| <= ||x|| L(C) + K' ||C|| L(x)."""
    hi = xi_upper(xi)
    return 1 + (1 + hi)


# --- rational linear algebra and the vanishing-determinant witness ----------

def _rref(mat: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def kernel_basis_rational(mat: Sequence[Sequence]) -> List[Tuple[int, ...]]:
    """Primitive integer representatives of a kernel basis of a rational
    matrix, from the free-variable parametrization of the RREF; each vector
    is normalized to content 1 with first nonzero entry positive."""
    mat = [[Fraction(v) for v in row] for row in mat]
    if not mat:
        return []
    cols = len(mat[0])
    red, pivots = _rref(mat)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -red[r][f]
        den = 1
        for v in vec:
            den = den * v.denominator // _gcd(den, v.denominator)
        ints = [int(v * den) for v in vec]
        g = 0
        for v in ints:
            g = _gcd(g, abs(v))
        ints = [v // g for v in ints]
        first = next(v for v in ints if v != 0)
        if first < 0:
            ints = [-v for v in ints]
        basis.append(tuple(ints))
    return basis


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass
class WitnessReport:
    """Outcome of the synthetic vanishing-determinant construction."""
    coefficients: Tuple[int, int, int]        # (a, b, c) with z = a y + b x + c w
    z: IntVec
    d_minus: int
    d_plus: int
    t: Optional[Fraction]
    checks: dict                              # name -> bool
    ok: bool


def prop43_witness(v: Sequence[int], w: Sequence[int], x: Sequence[int],
                   y: Sequence[int]) -> WitnessReport:
    """Solve a C(y,x) - b C(x,y) + c E(w,y,x) = 0 for a nontrivial integer
    (a,b,c), set z = a y + b x + c w, and verify exactly that both
    determinants det(v,w,x,Psi_eps(x,y,z)) vanish and that the three
    conclusion identities hold with a single rational t:
      (i)  C(y,z) = t C(x,y)
      (ii) C(z,y) = c t C(x,w)
      (iii) det(C(z,x), C(x,w)) = c^2 det(C(w,x), C(x,w)).
    """
    _check4(v, w, x, y)
    if det_int([v, w, x, y]) == 0:
        raise DegenerateBasis("(v,w,x,y) is not a basis of Q^4")
    if wedge([face_minus(x), face_plus(x)]).is_zero():
        raise DegenerateBasis("x- and x+ must be linearly independent")

    cyx = C_map(y, x)
    cxy = C_map(x, y)
    ewyx = E_map(w, y, x)
    system = [[cyx[k], -cxy[k], ewyx[k]] for k in range(2)]
    kernel = kernel_basis_rational(system)
    if not kernel:
        raise NoNontrivialSolution("2x3 homogeneous system with trivial kernel")
    # smallest positive denominator = any primitive integer representative;
    # tie-break lexicographically over the parametrization order
    a, b, c = min(kernel)
    z = tuple(a * yi + b * xi_ + c * wi for yi, xi_, wi in zip(y, x, w))

    d_minus = det_int([v, w, x, psi_map(-1, x, y, z)])
    d_plus = det_int([v, w, x, psi_map(+1, x, y, z)])

    checks = {"d_minus_zero": d_minus == 0, "d_plus_zero": d_plus == 0}
    cyz = C_map(y, z)
    t: Optional[Fraction] = None
    if cxy != (0, 0):
        ref = 0 if cxy[0] != 0 else 1
        t = Fraction(cyz[ref], cxy[ref])
        checks["t_consistent"] = (Fraction(cyz[0]) == t * cxy[0]
                                  and Fraction(cyz[1]) == t * cxy[1])
    else:
        checks["t_consistent"] = cyz == (0, 0)
    czy = C_map(z, y)
    cxw = C_map(x, w)
    if t is not None:
        ct = c * t
        checks["conclusion_ii"] = (Fraction(czy[0]) == ct * cxw[0]
                                   and Fraction(czy[1]) == ct * cxw[1])
    else:
        # t undetermined: the conclusion is vacuous unless c = 0 forces 0
        checks["conclusion_ii"] = (c != 0) or czy == (0, 0)
    czx = C_map(z, x)
    cwx = C_map(w, x)
    checks["conclusion_iii"] = det2(czx, cxw) == c * c * det2(cwx, cxw)

    ok = all(checks.values())
    return WitnessReport(coefficients=(a, b, c), z=z, d_minus=d_minus,
                         d_plus=d_plus, t=t, checks=checks, ok=ok)


# --- the Xi identities -------------------------------------------------------

def xi_identities_hold(x: Sequence[int], y: Sequence[int], z: Sequence[int]) -> bool:
    """All three closed-form identities for w = Xi(x,y,z), checked exactly:
      C(w,x)      = det(C(z,x),C(z,y)) det(C(x,y),C(x,z)) C(x,z)
      C(x,w)      = det(C(x,y),C(x,z)) C(z,x)
      Xi(x,z,w)   = det(C(w,x),C(x,w)) z
                  = det(C(z,x),C(z,y)) det(C(x,y),C(x,z))^2 det(C(x,z),C(z,x)) z
    """
    w = xi_map(x, y, z)
    czx, czy = C_map(z, x), C_map(z, y)
    cxy, cxz = C_map(x, y), C_map(x, z)
    m1 = det2(czx, czy)
    m2 = det2(cxy, cxz)
    cwx = C_map(w, x)
    cxw = C_map(x, w)
    if cwx != _smul(m1 * m2, cxz):
        return False
    if cxw != _smul(m2, czx):
        return False
    xzw = xi_map(x, z, w)
    s = det2(cwx, cxw)
    if xzw != _smul(s, z):
        return False
    s2 = m1 * m2 * m2 * det2(cxz, czx)
    return xzw == _smul(s2, z)
