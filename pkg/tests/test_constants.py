from fractions import Fraction

import mpmath
import pytest
import sympy

from diophlab.constants import (P2_POLY, RealExpr, build_constants,
                                compare_constants, count_positive_roots_below,
                                derive_lambda3_quartic, identity_catalog,
                                verify_identities)
from diophlab.exactreal import XiPolynomial
from diophlab.intervals import decimal_string


class TestDerivedQuartic:
    def test_matches_sympy_resultant(self):
        T, g = sympy.symbols("T g")
        res = sympy.resultant(T ** 2 - (2 * g + 1) * T + g, g ** 2 - g - 1, g)
        coeffs = tuple(int(c) for c in reversed(sympy.Poly(res, T).all_coeffs()))
        assert derive_lambda3_quartic() == coeffs == (-1, 3, 0, -4, 1)

    def test_smallest_positive_root(self, consts):
        assert count_positive_roots_below(consts.lambda3_quartic,
                                          Fraction(42, 100)) == 0
        assert count_positive_roots_below(consts.lambda3_quartic,
                                          Fraction(43, 100)) == 1

    def test_lambda2_unique_positive(self):
        assert count_positive_roots_below(P2_POLY, Fraction(10)) == 1


class TestGoldenRatio:
    def test_symbolic_reductions(self, consts):
        assert XiPolynomial((0, 0, 1)).reduce(consts.gamma) == (1, 1)   # g^2 = g+1
        assert XiPolynomial((0, 0, 0, 1)).reduce(consts.gamma) == (1, 2)  # g^3 = 2g+1

    def test_midpoint_matches_closed_form(self, consts):
        iv = consts.gamma.refine(Fraction(1, 10 ** 55))
        with mpmath.workprec(260):
            golden = (1 + mpmath.sqrt(5)) / 2
            mid = mpmath.mpf(iv.mid.numerator) / iv.mid.denominator
            assert abs(mid - golden) < mpmath.mpf(10) ** -54

    def test_conjugate_is_negative(self, consts):
        iv = consts.gamma_conjugate.refine(Fraction(1, 10 ** 10))
        assert iv.hi < 0


class TestOrdering:
    def test_lambda2_below_lambda3(self, consts):
        assert compare_constants(consts.lambda2, consts.lambda3) == -1

    def test_equal_constants(self, consts):
        assert compare_constants(consts.lambda3, consts.lambda3) == 0


class TestIdentities:
    def test_catalog_size(self, consts):
        assert len(identity_catalog(consts)) == 10

    def test_all_pass_at_1e40(self, consts):
        rows = verify_identities(consts, Fraction(1, 10 ** 40))
        assert len(rows) == 10
        for name, residual in rows:
            assert residual < Fraction(1, 10 ** 40), name

    def test_residuals_shrink_with_precision(self, consts):
        # halving the tolerance never turns a passing identity into a failure
        for exp in (20, 40, 60, 80):
            rows = verify_identities(consts, Fraction(1, 10 ** exp))
            assert all(res < Fraction(1, 10 ** exp) for _, res in rows)

    def test_enclosure_widths(self, consts):
        for value in (consts.gamma, consts.lambda2, consts.lambda3):
            assert value.enclosure().width <= Fraction(1, 10 ** 60)


class TestRealExpr:
    def test_arithmetic(self, consts):
        lam = RealExpr.of(consts.lambda3)
        gam = RealExpr.of(consts.gamma)
        theta = consts.theta
        # theta * lambda = 1 - lambda, exactly
        resid = (theta * lam - (1 - lam)).enclosure(Fraction(1, 10 ** 45))
        assert resid.contains_zero() and resid.mag < Fraction(1, 10 ** 45)
        # gamma - 1 = 1/gamma
        resid = (gam - 1 - 1 / gam).enclosure(Fraction(1, 10 ** 45))
        assert resid.contains_zero()

    def test_sign(self, consts):
        assert consts.sigma.sign() == 1
        assert consts.alpha.sign() == -1

    def test_named_values_table(self, consts):
        vals = consts.named_values()
        width = Fraction(1, 10 ** 40)
        lam3 = decimal_string(vals["lambda3"].enclosure(width), 20)
        assert lam3.startswith("0.4245069034")
        sig = decimal_string(vals["sigma"].enclosure(width), 20)
        assert sig.startswith("0.0396126915")


class TestAgainstFloatOracle:
    def test_fifty_digit_values(self, consts):
        # cross-check every derived constant against an independent
        # high-precision evaluation
        with mpmath.workprec(300):
            lam = mpmath.findroot(
                lambda t: t ** 4 - 4 * t ** 3 + 3 * t - 1, mpmath.mpf("0.4245"))
            gam = (1 + mpmath.sqrt(5)) / 2
            theta = (1 - lam) / lam
            expected = {
                "lambda3": lam,
                "gamma": gam,
                "theta": theta,
                "sigma": 2 - (3 + gam) * lam,
                "alpha": (-lam ** 4 + lam ** 3 + lam ** 2 - 3 * lam + 1)
                         / (lam * (lam ** 2 - lam + 1)),
                "minus_lambda_over_gamma": -lam / gam,
                "lambda_sq_over_gamma": lam ** 2 / gam,
                "gamma4_lambda_minus_gamma2": gam ** 4 * lam - gam ** 2,
                "three_lambda_minus_one": 3 * lam - 1,
                "gamma_lambda_minus_one": gam * lam - 1,
            }
            vals = consts.named_values()
            for name, want in expected.items():
                iv = vals[name].enclosure(Fraction(1, 10 ** 55))
                got = mpmath.mpf(iv.mid.numerator) / iv.mid.denominator
                assert abs(got - want) < mpmath.mpf(10) ** -50, name
