import json
import math
from fractions import Fraction

import pytest

from diophlab.errors import (DegreeTooSmall, MismatchFound, RationalInput,
                             XiOutOfRange)
from diophlab.exactreal import make_algebraic
from diophlab.minpoints import (MinimalPointRecord, best_for_x0,
                                canonicalize_xi, continue_scan,
                                derive_records_bruteforce,
                                enumerate_minimal_points, link_successors,
                                read_records_jsonl, records_to_jsonl,
                                verify_minimality_oracle)


def sqrt2_minus_1_records_oracle(bound):
    """Record x0 values for sqrt(2)-1, n=1, derived with plain integer
    arithmetic: s = sqrt(2)-1 to 30 guarded decimal digits via isqrt."""
    scale = 10 ** 30
    s = Fraction(math.isqrt(2 * scale * scale) - scale, scale)  # error < 1e-30
    err = Fraction(1, scale)
    best = None
    out = []
    for x0 in range(1, bound + 1):
        v = x0 * s
        r = round(v)  # |v - half-integer| >> x0 * err, so rounding is safe
        d = abs(v - r)
        if best is None or d + x0 * err < best:
            out.append(x0)
            best = d + x0 * err
        elif d - x0 * err < best:  # pragma: no cover - tolerance sanity
            raise AssertionError("oracle precision insufficient")
    return out


class TestBestForX0:
    def test_unit_n1(self, xi_sqrt2):
        assert best_for_x0(1, xi_sqrt2, 1) == (1, 0)

    def test_convergent_n1(self, xi_sqrt2):
        # 12 * 0.41421 ~ 4.97 rounds to 5
        assert best_for_x0(12, xi_sqrt2, 1) == (12, 5)

    def test_unit_n3(self, xi_quartic):
        # all three powers of 2^(1/4)-1 are below 1/2
        assert best_for_x0(1, xi_quartic, 3) == (1, 0, 0, 0)

    def test_bad_x0(self, xi_sqrt2):
        with pytest.raises(XiOutOfRange):
            best_for_x0(0, xi_sqrt2, 1)


class TestEnumerate:
    def test_continued_fraction_denominators(self, xi_sqrt2):
        recs = enumerate_minimal_points(xi_sqrt2, 1, x0_max=100)
        assert [r.X for r in recs] == [1, 2, 5, 12, 29, 70]
        assert [r.X for r in recs] == sqrt2_minus_1_records_oracle(100)

    def test_first_record_is_one(self, xi_sqrt2, xi_quartic):
        for xi, n in ((xi_sqrt2, 1), (xi_quartic, 3)):
            recs = enumerate_minimal_points(xi, n, x0_max=10)
            assert recs[0].X == 1 and recs[0].index == 1

    def test_oracle_equivalence_small(self, xi_sqrt2, xi_quartic):
        for xi, n in ((xi_sqrt2, 1), (xi_quartic, 3)):
            engine = enumerate_minimal_points(xi, n, x0_max=10 ** 4)
            oracle = derive_records_bruteforce(xi, n, 10 ** 4)
            assert records_to_jsonl(engine) == records_to_jsonl(oracle)

    def test_shard_independence(self, xi_quartic):
        base = records_to_jsonl(enumerate_minimal_points(xi_quartic, 3,
                                                         x0_max=20000, shards=1))
        for shards in (2, 3, 7):
            got = records_to_jsonl(enumerate_minimal_points(
                xi_quartic, 3, x0_max=20000, shards=shards))
            assert got == base

    def test_count_mode(self, xi_quartic):
        by_count = enumerate_minimal_points(xi_quartic, 3, count=6)
        by_bound = enumerate_minimal_points(xi_quartic, 3, x0_max=2000)
        assert records_to_jsonl(by_count) == records_to_jsonl(by_bound[:6])

    def test_resume_matches_fresh(self, xi_quartic):
        fresh = enumerate_minimal_points(xi_quartic, 3, x0_max=20000)
        first = enumerate_minimal_points(xi_quartic, 3, x0_max=9000)
        tail = continue_scan(first, xi_quartic, 3, 9001, 20000)
        assert records_to_jsonl(fresh) == records_to_jsonl(
            link_successors(first + tail))

    def test_records_norm_is_x0(self, records_n3_1e4):
        for r in records_n3_1e4:
            assert r.X == r.x[0]
            assert r.primitive

    def test_l_digits_are_30_significant(self, records_n3_1e4):
        for r in records_n3_1e4:
            digits = r.L_digits.replace("0.", "").lstrip("0")
            assert len(digits) == 30

    def test_monotonicity(self, xi_quartic, records_n3_1e4):
        from diophlab.latgeom import compare_L
        for a, b in zip(records_n3_1e4, records_n3_1e4[1:]):
            assert a.X < b.X
            assert compare_L(b.x, a.x, xi_quartic) < 0
            assert a.x0_next == b.X

    def test_argument_validation(self, xi_sqrt2, xi_quartic):
        with pytest.raises(ValueError):
            enumerate_minimal_points(xi_sqrt2, 1)
        with pytest.raises(ValueError):
            enumerate_minimal_points(xi_sqrt2, 1, x0_max=10, count=5)
        with pytest.raises(DegreeTooSmall):
            enumerate_minimal_points(xi_sqrt2, 2, x0_max=10)
        big = make_algebraic([-2, 0, 1], (1, 2))  # sqrt2 > 1
        with pytest.raises(XiOutOfRange):
            enumerate_minimal_points(big, 1, x0_max=10)


class TestOracleChecks:
    def test_match(self, xi_quartic, records_n3_1e4):
        report = verify_minimality_oracle(records_n3_1e4, xi_quartic, 3, 10 ** 4)
        assert report.n_records == len(records_n3_1e4)
        assert report.properties_ok

    def test_tampered_missing_record(self, xi_quartic, records_n3_1e4):
        tampered = records_n3_1e4[:3] + records_n3_1e4[4:]
        with pytest.raises(MismatchFound):
            verify_minimality_oracle(tampered, xi_quartic, 3, 10 ** 4)

    def test_empty_list(self, xi_quartic):
        with pytest.raises(MismatchFound):
            verify_minimality_oracle([], xi_quartic, 3, 10)


class TestCanonicalize:
    def test_sqrt2(self):
        xi, shift = canonicalize_xi(make_algebraic([-2, 0, 1], (1, 2)))
        assert shift == 1
        assert xi.poly == (-1, 2, 1)

    def test_fourth_root(self):
        xi, shift = canonicalize_xi(make_algebraic([-2, 0, 0, 0, 1], (1, 2)))
        assert shift == 1
        # polynomial shift oracle: (T+1)^4 - 2 expanded
        import sympy
        T = sympy.Symbol("T")
        coeffs = [int(c) for c in
                  reversed(sympy.Poly(sympy.expand((T + 1) ** 4 - 2), T).all_coeffs())]
        assert list(xi.poly) == coeffs == [-1, 4, 6, 4, 1]

    def test_already_canonical(self, xi_quartic):
        xi, shift = canonicalize_xi(xi_quartic)
        assert shift == 0
        assert xi.poly == xi_quartic.poly

    def test_rational_refused(self):
        half = make_algebraic([-1, 2], (0, 1))
        with pytest.raises(RationalInput):
            canonicalize_xi(half)


class TestSerialization:
    def test_roundtrip(self, records_n3_1e4):
        text = records_to_jsonl(records_n3_1e4)
        back = read_records_jsonl(text)
        assert records_to_jsonl(back) == text
        assert [r.x0_next for r in back] == [r.x0_next for r in records_n3_1e4]

    def test_line_schema(self, records_n3_1e4):
        line = records_n3_1e4[0].to_json_line()
        obj = json.loads(line)
        assert set(obj) == {"i", "x", "X", "L", "argmax", "primitive"}
        assert obj["x"] == [str(c) for c in records_n3_1e4[0].x]
        assert isinstance(obj["primitive"], bool)
