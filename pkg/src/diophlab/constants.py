"""The named exponent constants and the exact identities connecting them.

gamma (golden ratio), lambda2, lambda3 are constructed as certified algebraic
numbers; theta, sigma, alpha are derived expressions evaluated through exact
interval arithmetic at escalating precision.  The quartic satisfied by
lambda3 is produced by resultant elimination and lambda3's membership in the
original quadratic (coefficients in Z[gamma]) is certified symbolically:
the resultant factors the quartic through the two conjugate embeddings of
gamma, and the wrong embedding is excluded by a sign computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from . import polys
from .errors import PrecisionError, ResidualTooLarge
from .exactreal import AlgebraicReal, XiPolynomial, make_algebraic
from .intervals import Interval

_MAX_BITS = 1 << 17


class RealExpr:
    """A real number given by certified enclosures at any requested width."""

    __slots__ = ("_fn",)

    def __init__(self, fn: Callable[[int], Interval]):
        self._fn = fn

    @staticmethod
    def of(value) -> "RealExpr":
        if isinstance(value, RealExpr):
            return value
        if isinstance(value, AlgebraicReal):
            return RealExpr(value.refine_bits)
        q = Fraction(value)
        return RealExpr(lambda bits: Interval.point(q))

    def at_bits(self, bits: int) -> Interval:
        return self._fn(bits)

    def enclosure(self, width) -> Interval:
        width = Fraction(width)
        bits = 64
        while bits <= _MAX_BITS:
            iv = self._fn(bits)
            if iv.width <= width:
                return iv
            bits *= 2
        raise PrecisionError(f"no enclosure of width {width} within precision budget")

    def sign(self) -> int:
        """Sign by refinement; only valid for provably nonzero values."""
        bits = 64
        while bits <= _MAX_BITS:
            s = self._fn(bits).sign()
            if s != 0:
                return s
            bits *= 2
        raise PrecisionError("sign did not resolve; value may be zero")

    # arithmetic combinators -------------------------------------------------

    def __add__(self, other):
        o = RealExpr.of(other)
        return RealExpr(lambda bits: self._fn(bits) + o._fn(bits))

    __radd__ = __add__

    def __neg__(self):
        return RealExpr(lambda bits: -self._fn(bits))

    def __sub__(self, other):
        return self + (-RealExpr.of(other))

    def __rsub__(self, other):
        return RealExpr.of(other) + (-self)

    def __mul__(self, other):
        o = RealExpr.of(other)
        return RealExpr(lambda bits: self._fn(bits) * o._fn(bits))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RealExpr.of(other)

        def fn(bits):
            den = o._fn(bits)
            b = bits
            while den.contains_zero():
                b *= 2
                if b > _MAX_BITS:
                    raise PrecisionError("division by a possibly-zero value")
                den = o._fn(b)
            return self._fn(bits) / den
        return RealExpr(fn)

    def __rtruediv__(self, other):
        return RealExpr.of(other) / self

    def __pow__(self, k: int):
        return RealExpr(lambda bits: self._fn(bits) ** k)


@dataclass
class ExponentConstants:
    """gamma, lambda2, lambda3 and the derived exponents."""
    gamma: AlgebraicReal
    gamma_conjugate: AlgebraicReal
    lambda2: AlgebraicReal
    lambda3: AlgebraicReal
    lambda3_quartic: tuple
    theta: RealExpr
    sigma: RealExpr
    alpha: RealExpr

    def named_values(self) -> Dict[str, RealExpr]:
        lam = RealExpr.of(self.lambda3)
        gam = RealExpr.of(self.gamma)
        return {
            "gamma": gam,
            "lambda2": RealExpr.of(self.lambda2),
            "lambda3": lam,
            "theta": self.theta,
            "sigma": self.sigma,
            "alpha": self.alpha,
            "minus_lambda_over_gamma": -lam / gam,
            "lambda_sq_over_gamma": lam * lam / gam,
            "gamma4_lambda_minus_gamma2": gam ** 4 * lam - gam ** 2,
            "three_lambda_minus_one": 3 * lam - 1,
            "gamma_lambda_minus_one": gam * lam - 1,
            "minus_lambda": -lam,
        }


P2_POLY = (-1, 2, 2, -4, 3)        # 3T^4 - 4T^3 + 2T^2 + 2T - 1, constant first
GOLDEN_POLY = (-1, -1, 1)          # T^2 - T - 1


def derive_lambda3_quartic() -> tuple:
    """Eliminate gamma between lambda^2 - gamma^3 lambda + gamma (with
    gamma^3 reduced to 2 gamma + 1) and gamma^2 - gamma - 1, by a Sylvester
    resultant over Z[T]; normalized primitive with positive leading term."""
    # as polynomials in gamma with coefficients in Z[T]:
    #   e = (T^2 - T) + gamma (1 - 2T),   q = -1 - gamma + gamma^2
    e = [(0, -1, 1), (1, -2)]
    q = [(-1,), (-1,), (1,)]
    res = polys.resultant_bivariate(e, q)
    return polys.primitive(res)


def _cauchy_bound(p: tuple) -> Fraction:
    lead = abs(p[-1])
    return 1 + max(abs(c) for c in p[:-1]) / Fraction(lead)


def count_positive_roots_below(p: tuple, bound: Fraction) -> int:
    """Number of roots of p in (0, bound]."""
    return polys.count_roots(p, Fraction(0), Fraction(bound))


def build_constants(enclosure_width=Fraction(1, 10 ** 60)) -> ExponentConstants:
    gamma = make_algebraic(GOLDEN_POLY, (1, 2))
    gamma_conj = make_algebraic(GOLDEN_POLY, (-1, 0))
    lambda2 = make_algebraic(P2_POLY, (Fraction(42, 100), Fraction(4242, 10000)))
    quartic = derive_lambda3_quartic()
    lambda3 = make_algebraic(quartic, (Fraction(42, 100), Fraction(43, 100)))

    # smallest-positive-root certificates
    assert count_positive_roots_below(quartic, Fraction(42, 100)) == 0
    assert count_positive_roots_below(P2_POLY, Fraction(42, 100)) == 0
    assert count_positive_roots_below(P2_POLY, _cauchy_bound(P2_POLY)) == 1, \
        "lambda2 should be the unique positive root"

    # golden-ratio reductions are exact: gamma^2 = gamma + 1, gamma^3 = 2 gamma + 1
    assert XiPolynomial((0, 0, 1)).reduce(gamma) == (1, 1)
    assert XiPolynomial((0, 0, 0, 1)).reduce(gamma) == (1, 2)

    certify_quadratic_membership(gamma, gamma_conj, lambda3, quartic)

    for value in (gamma, gamma_conj, lambda2, lambda3):
        value.refine(enclosure_width)

    lam = RealExpr.of(lambda3)
    gam = RealExpr.of(gamma)
    theta = (1 - lam) / lam
    sigma = 2 - (3 + gam) * lam
    alpha = (-(lam ** 4) + lam ** 3 + lam ** 2 - 3 * lam + 1) / (lam * (lam ** 2 - lam + 1))
    return ExponentConstants(gamma=gamma, gamma_conjugate=gamma_conj,
                             lambda2=lambda2, lambda3=lambda3,
                             lambda3_quartic=quartic, theta=theta,
                             sigma=sigma, alpha=alpha)


def certify_quadratic_membership(gamma: AlgebraicReal, gamma_conj: AlgebraicReal,
                                 lambda3: AlgebraicReal, quartic: tuple) -> None:
    """Exact certificate that lambda3^2 - gamma^3 lambda3 + gamma = 0 with the
    real golden ratio gamma.

    The resultant identity factors quartic(T) = +- e(gamma, T) e(gamma', T)
    over the two conjugate roots of the golden polynomial; quartic(lambda3)=0
    by construction, and e(gamma', lambda3) is certified nonzero by interval
    refinement, which forces e(gamma, lambda3) = 0 exactly.
    """
    res = polys.primitive(derive_lambda3_quartic())
    assert res == polys.primitive(quartic), "resultant does not match the quartic"

    def e_at(g: AlgebraicReal, bits: int) -> Interval:
        giv = g.refine_bits(bits)
        liv = lambda3.refine_bits(bits)
        return liv * liv - (2 * giv + 1) * liv + giv

    bits = 64
    while True:
        if e_at(gamma_conj, bits).sign() != 0:
            break
        bits *= 2
        if bits > _MAX_BITS:  # pragma: no cover
            raise PrecisionError("conjugate exclusion did not resolve")
    # and the genuine embedding is numerically consistent with zero
    assert e_at(gamma, 256).contains_zero()


def compare_constants(a: AlgebraicReal, b: AlgebraicReal) -> int:
    """Exact comparison of two algebraic numbers, by refinement.  Equal values
    are recognized through the root-separation bound of the common minimal
    polynomial (distinct minimal polynomials mean distinct values here, since
    construction reduces to irreducible factors)."""
    bits = 64
    while bits <= _MAX_BITS:
        ia, ib = a.refine_bits(bits), b.refine_bits(bits)
        if ia.hi < ib.lo:
            return -1
        if ib.hi < ia.lo:
            return 1
        if a.poly == b.poly and max(ia.width, ib.width) < _separation_bound(a.poly):
            return 0
        bits *= 2
    raise PrecisionError("comparison did not resolve")


def _separation_bound(p: tuple) -> Fraction:
    """Crude positive lower bound on the distance between distinct roots
    (Mahler-style): fine for the tiny polynomials used here."""
    d = polys.degree(p)
    h = max(abs(c) for c in p)
    return Fraction(1, 2 * (d ** d) * (h + 1) ** (2 * d))


# --- the identity catalog ----------------------------------------------------

def identity_catalog(consts: ExponentConstants) -> List[Tuple[str, RealExpr, RealExpr]]:
    lam = RealExpr.of(consts.lambda3)
    gam = RealExpr.of(consts.gamma)
    th = consts.theta
    zero = RealExpr.of(0)
    return [
        ("theta_minus_inv_theta", th - 1 / th, 1 / gam),
        ("defining_quadratic", lam ** 2 - gam ** 3 * lam + gam, zero),
        ("theta_sq_minus_one", th ** 2 - 1, th / gam),
        ("four_term_zero", gam * th - lam * th - lam * gam - lam * th * gam, zero),
        ("one_minus_lt_lg", 1 - lam * th - lam * gam, -lam / gam),
        ("theta_minus_lg_ltg", th - lam * gam - lam * th * gam, -lam / gam),
        ("theta_minus_l_lt", th - lam - lam * th, lam * th / gam),
        ("gamma_minus_lt_lg", gam - lam * th - lam * gam, lam * th / gam),
        ("gamma_minus_lgt_lt", gam - lam * gam * th - lam * th, lam ** 2 / gam),
        ("sigma_factorization", consts.sigma, (gam - th) * (1 - 2 * lam)),
    ]


def verify_identities(consts: ExponentConstants, precision=Fraction(1, 10 ** 40)):
    """Evaluate |LHS - RHS| for every catalog identity with certified interval
    arithmetic; each must come out below `precision`.  Returns rows of
    (name, residual_upper_bound).  Raises ResidualTooLarge naming the first
    identity whose residual cannot be brought below the threshold."""
    precision = Fraction(precision)
    rows = []
    for name, lhs, rhs in identity_catalog(consts):
        diff = lhs - rhs
        try:
            iv = diff.enclosure(precision / 2)
        except PrecisionError as exc:  # pragma: no cover
            raise ResidualTooLarge(f"{name}: {exc}") from exc
        residual = iv.mag
        if residual >= precision:
            raise ResidualTooLarge(f"{name}: residual bound {residual} >= {precision}")
        rows.append((name, residual))
    return rows
