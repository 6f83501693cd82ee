from fractions import Fraction

import pytest

from diophlab.errors import GridOutOfRange, IndexNotInI, TooFewRecords
from diophlab.latgeom import wedge
from diophlab.maps import det2
from diophlab.minpoints import MinimalPointRecord
from diophlab.structure import (chain_analyze, cij_table, exponent_report,
                                hypothesis_scan, schmidt_audit,
                                schmidt_raw_ratio, write_chain_csv,
                                write_cij_csv, write_exponents_csv,
                                write_schmidt_csv)


def naive_jump_sets(points):
    """Independent I/J detection through rational rank computations."""
    def same_span(vs, ws):
        m = [list(map(Fraction, v)) for v in vs + ws]
        return _rank(m) == _rank([list(map(Fraction, v)) for v in vs])

    m = len(points)
    I = []
    for i in range(2, m):
        w_i = [points[i - 2], points[i - 1]]
        w_next = [points[i - 1], points[i]]
        if not same_span(w_i, w_next):
            I.append(i)
    J = {}
    for a, b in zip(I, I[1:]):
        u_a = [points[a - 2], points[a - 1], points[a]]
        u_b = [points[b - 2], points[b - 1], points[b]]
        J[a] = not same_span(u_a, u_b)
    return I, J


def _rank(rows):
    rows = [r[:] for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


class TestChainAnalyze:
    def test_against_naive_jump_sets(self, xi_quartic, records_n3_1e5):
        chain = chain_analyze(records_n3_1e5, xi_quartic)
        I, J = naive_jump_sets([r.x for r in records_n3_1e5])
        assert chain.I == I
        for i in I[:-1]:
            assert chain.rows[i].in_J == J[i]
        assert chain.rows[I[-1]].in_J is None  # successor out of range

    def test_wedge_primitivity(self, xi_quartic, records_n3_1e5):
        chain = chain_analyze(records_n3_1e5, xi_quartic)
        for i, row in chain.rows.items():
            if row.dim_w == 2:
                assert row.w_primitive

    def test_structural_flags(self, xi_quartic, records_n3_1e5):
        chain = chain_analyze(records_n3_1e5, xi_quartic)
        assert chain.collapses == []
        assert chain.middle_equalities_ok
        assert chain.basis_triples_ok
        for i in chain.I:
            assert chain.rows[i].u_rank == 3
            assert chain.rows[i].h_u >= 1

    def test_last_index_out_of_I(self, xi_quartic, records_n3_1e5):
        chain = chain_analyze(records_n3_1e5, xi_quartic)
        last = records_n3_1e5[-1].index
        assert last not in chain.I
        assert chain.rows[last].in_I is None

    def test_too_few(self, xi_quartic, records_n3_1e5):
        with pytest.raises(TooFewRecords):
            chain_analyze(records_n3_1e5[:2], xi_quartic)

    def test_collapse_reported_on_fault(self, xi_quartic, records_n3_1e5):
        # proportional neighbors cannot occur in genuine data; inject one
        base = list(records_n3_1e5[:4])
        fake_x = tuple(2 * c for c in base[1].x)
        fake = MinimalPointRecord(index=3, x=fake_x, X=2 * base[1].X,
                                  L_digits=base[2].L_digits, argmax=1,
                                  primitive=False, x0_next=base[3].X)
        faulty = [base[0], base[1], fake, base[3]]
        chain = chain_analyze(faulty, xi_quartic)
        assert 3 in chain.collapses

    def test_prop24_ratio_bounded(self, xi_quartic, records_n3_1e6):
        # H(W_i) tracks X_i L_{i-1}: the exact ratio stays in a narrow band
        chain = chain_analyze(records_n3_1e6, xi_quartic)
        ratios = [row.prop24_i_ratio for row in chain.rows.values()
                  if row.prop24_i_ratio is not None]
        assert ratios
        assert all(Fraction(1, 4) < r < 4 for r in ratios)


class TestCijTable:
    def test_on_data(self, xi_quartic, records_n3_1e5):
        chain = chain_analyze(records_n3_1e5, xi_quartic)
        table = cij_table(records_n3_1e5, chain)
        assert len(table.entries) == len(chain.I) - 1
        for e in table.entries:
            assert e.status in ("proportional", "not_proportional", "degenerate")
            if e.status == "proportional":
                # C_{i,j} = b C_i exactly
                c_i = chain.C[e.i]
                assert e.c_ij == tuple(int(e.b * v) for v in c_i)

    def test_rejects_non_consecutive(self, xi_quartic, records_n3_1e5):
        chain = chain_analyze(records_n3_1e5, xi_quartic)
        with pytest.raises(IndexNotInI):
            cij_table(records_n3_1e5, chain, pairs=[(chain.I[0], chain.I[0] + 100)])

    def test_degenerate_entry(self, xi_quartic):
        # hand-built records whose C_i vanishes (x2 with collapsed faces)
        def rec(i, x, nxt):
            return MinimalPointRecord(index=i, x=x, X=max(abs(c) for c in x),
                                      L_digits="0.1", argmax=1, primitive=True,
                                      x0_next=nxt)
        pts = [(1, 0, 0, 0), (2, 1, 1, 1), (5, 0, 1, 0), (9, 4, 2, 1), (14, 1, 2, 3)]
        records = [rec(i + 1, x, None) for i, x in enumerate(pts)]
        chain = chain_analyze(records)
        if len(chain.I) >= 2:
            table = cij_table(records, chain)
            assert {e.status for e in table.entries} <= {
                "proportional", "not_proportional", "degenerate"}

    def test_det_self_is_zero(self):
        assert det2((3, 4), (3, 4)) == 0


class TestSchmidtAudit:
    def test_transverse_planes(self):
        # <e1,e2> against <e3,e4>: intersection {0}, sum R^4, all heights 1
        v = [(1, 0, 0, 0), (0, 1, 0, 0)]
        w = [(0, 0, 1, 0), (0, 0, 0, 1)]
        assert schmidt_raw_ratio(v, w) == 1

    def test_equal_planes(self):
        v = [(1, 2, 0, 5), (0, 1, 1, 3)]
        assert schmidt_raw_ratio(v, v) == 1

    def test_audit_on_data(self, xi_quartic, records_n3_1e6):
        chain = chain_analyze(records_n3_1e6, xi_quartic)
        audit = schmidt_audit(chain)
        assert audit.raw_rows
        # the sup-norm Schmidt product can exceed 1; the audit records the
        # observed maximum instead of asserting the Euclidean-height bound
        assert audit.max_raw == max(r for _, r in audit.raw_rows)
        for i, r in audit.raw_rows:
            if not chain.in_I(i):
                assert r == 1  # equal planes give exactly 1

    def test_raw_equals_prop_ii_on_jumps(self, xi_quartic, records_n3_1e5):
        # at a jump the intersection is <x_i> and the sum is U_i, so the raw
        # product coincides with the structural ratio
        chain = chain_analyze(records_n3_1e5, xi_quartic)
        audit = schmidt_audit(chain)
        raw = dict(audit.raw_rows)
        for i, ratio in audit.prop_ii_rows:
            if i in raw and i + 1 <= records_n3_1e5[-1].index:
                assert raw[i] == ratio


class TestExponentReport:
    def test_two_records(self, xi_sqrt2):
        from diophlab.minpoints import enumerate_minimal_points
        recs = enumerate_minimal_points(xi_sqrt2, 1, x0_max=2)
        rep = exponent_report(recs, 1)
        assert len(rep.rows) == 2
        assert rep.rows[0].uniform is not None
        assert rep.rows[1].uniform is None
        assert rep.windowed_uniform_min == rep.rows[0].uniform[0]

    def test_too_few(self, records_n3_1e4):
        with pytest.raises(TooFewRecords):
            exponent_report(records_n3_1e4[:1], 3)

    def test_interval_widths_certified(self, records_n3_1e5):
        rep = exponent_report(records_n3_1e5, 3)
        for row in rep.rows:
            for pair in (row.uniform, row.ordinary, row.dirichlet):
                if pair is not None:
                    assert pair[1] - pair[0] < 1e-9

    def test_n1_window_near_one(self, records_n1_1e6):
        rep = exponent_report(records_n1_1e6, 1)
        assert 0.95 <= rep.windowed_uniform_min <= rep.windowed_uniform_max <= 1.05


class TestHypothesisScan:
    def test_lambda_zero_always_satisfiable(self, records_n3_1e5):
        grid = [r.X for r in records_n3_1e5]
        scan = hypothesis_scan(records_n3_1e5, 0, 1, grid)
        assert scan.first_failure is None
        assert all(v is True for _, v in scan.results)

    def test_lambda_one_fails_quickly(self, records_n3_1e5):
        grid = list(range(5, 2000, 10))
        scan = hypothesis_scan(records_n3_1e5, 1, 1, grid)
        assert scan.first_failure is not None
        assert scan.first_failure < 500

    def test_grid_below_first_record(self, records_n3_1e5):
        with pytest.raises(GridOutOfRange):
            hypothesis_scan(records_n3_1e5, Fraction(1, 2), 1, [0])

    def test_grid_beyond_coverage(self, records_n3_1e5):
        top = records_n3_1e5[-1].X
        with pytest.raises(GridOutOfRange):
            hypothesis_scan(records_n3_1e5, Fraction(1, 2), 1, [top + 1])
        # explicit scan bound extends coverage
        scan = hypothesis_scan(records_n3_1e5, 0, 1, [top + 1],
                               scan_bound=10 ** 5)
        assert scan.results[0][1] is True


class TestCsvOutput:
    def test_files_have_comment_headers(self, tmp_path, xi_quartic, records_n3_1e5):
        chain = chain_analyze(records_n3_1e5, xi_quartic)
        write_chain_csv(chain, str(tmp_path / "chain.csv"))
        write_cij_csv(cij_table(records_n3_1e5, chain), str(tmp_path / "cij.csv"))
        write_schmidt_csv(schmidt_audit(chain), str(tmp_path / "schmidt.csv"))
        write_exponents_csv(exponent_report(records_n3_1e5, 3),
                            str(tmp_path / "exponents.csv"))
        for name in ("chain.csv", "cij.csv", "schmidt.csv", "exponents.csv"):
            text = (tmp_path / name).read_text()
            assert text.startswith("#")
            assert len(text.splitlines()) > 1
