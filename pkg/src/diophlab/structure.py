"""Derived structure of a minimal-point sequence: the planes W_i through
consecutive points, the 3-spaces U_i, the jump sets I and J, subspace
heights, C-pair tables, exponent estimates, and inequality audits.

Subspace equality is decided by exact integer wedge proportionality; heights
are exact integers; every ratio in the audits is an exact rational.  The
exponent report is the one place where transcendental functions enter, and
there the logarithms are taken with outward-rounded interval arithmetic on
certified enclosures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from .errors import GridOutOfRange, IndexNotInI, TooFewRecords
from .exactreal import AlgebraicReal
from .intervals import Interval
from .latgeom import (MultiVector, hnf, integer_kernel, l_value,
                      lattice_saturate, subspace_height, wedge)
from .maps import C_map, det2
from .minpoints import MinimalPointRecord

Pair = Tuple[int, int]


# --- chain analysis ----------------------------------------------------------

@dataclass
class ChainRow:
    i: int                                   # sequence index, i >= 2
    wedge2: MultiVector                      # x_{i-1} ^ x_i
    dim_w: int
    h_w: Optional[int]
    w_primitive: Optional[bool]
    in_I: Optional[bool]                     # None: undetermined (boundary)
    h_u: Optional[int] = None                # for i in I
    u_rank: Optional[int] = None
    in_J: Optional[bool] = None              # None: unknown (no successor in I)
    prop24_i_ratio: Optional[float] = None   # H(W_i) / (X_i L_{i-1})


@dataclass
class ChainAnalysis:
    records: List[MinimalPointRecord]
    rows: Dict[int, ChainRow]
    I: List[int]
    collapses: List[int]
    C: Dict[int, Pair]                       # C_i = C(x_i, x_{i+1})
    middle_equalities_ok: bool               # W_{i+1} = ... = W_j between I-jumps
    basis_triples_ok: bool                   # (x_h, x_i, x_j) spans U_i, rank 3

    def in_I(self, i: int) -> bool:
        row = self.rows.get(i)
        return bool(row and row.in_I)

    def consecutive_I_pairs(self) -> List[Tuple[int, int]]:
        return list(zip(self.I, self.I[1:]))


def chain_analyze(records: Sequence[MinimalPointRecord],
                  xi: Optional[AlgebraicReal] = None) -> ChainAnalysis:
    """Full chain structure for an n = 3 record list (>= 3 records)."""
    if len(records) < 3:
        raise TooFewRecords("chain analysis needs at least 3 records")
    pts = [r.x for r in records]
    if any(len(p) != 4 for p in pts):
        raise TooFewRecords("chain analysis is defined for n = 3 (length-4 points)")
    m = len(pts)

    rows: Dict[int, ChainRow] = {}
    collapses: List[int] = []
    wedges: Dict[int, MultiVector] = {}
    for i in range(2, m + 1):                # W_i = <x_{i-1}, x_i>
        w = wedge([pts[i - 2], pts[i - 1]])
        wedges[i] = w
        if w.is_zero():
            collapses.append(i)
            rows[i] = ChainRow(i=i, wedge2=w, dim_w=1, h_w=None,
                               w_primitive=None, in_I=None)
            continue
        h_w = subspace_height([pts[i - 2], pts[i - 1]])
        ratio = None
        if xi is not None:
            l_prev, _ = l_value(pts[i - 2], xi, Fraction(1, 10 ** 40))
            ratio = float(Fraction(h_w) / (records[i - 1].X * l_prev.mid))
        rows[i] = ChainRow(i=i, wedge2=w, dim_w=2, h_w=h_w,
                           w_primitive=w.is_primitive(), in_I=None,
                           prop24_i_ratio=ratio)

    I: List[int] = []
    for i in range(2, m):                    # membership needs W_{i+1}
        if wedges[i].is_zero() or wedges[i + 1].is_zero():
            continue
        jump = not wedges[i].proportional(wedges[i + 1])
        rows[i].in_I = jump
        if jump:
            I.append(i)

    for i in I:                              # U_i = <x_{i-1}, x_i, x_{i+1}>
        w3 = wedge([pts[i - 2], pts[i - 1], pts[i]])
        if w3.is_zero():
            rows[i].u_rank = 2               # x_{i-1}, x_i independent already
            rows[i].h_u = None
        else:
            rows[i].u_rank = 3
            rows[i].h_u = subspace_height([pts[i - 2], pts[i - 1], pts[i]])

    # J membership: U_i vs U_j for consecutive i < j in I
    u_wedges = {i: wedge([pts[i - 2], pts[i - 1], pts[i]]) for i in I}
    for a, b in zip(I, I[1:]):
        if u_wedges[a].is_zero() or u_wedges[b].is_zero():
            continue
        rows[a].in_J = not u_wedges[a].proportional(u_wedges[b])
    # the final I element keeps in_J = None: its successor is out of range

    # between consecutive jumps the middle planes all coincide
    middles_ok = True
    for a, b in zip(I, I[1:]):
        for k in range(a + 1, b):
            if not wedges[k + 1].proportional(wedges[a + 1]):
                middles_ok = False
    # and (x_h, x_i, x_j) is a basis of U_i for consecutive h < i < j in I
    triples_ok = True
    for h, i, j in zip(I, I[1:], I[2:]):
        w3 = wedge([pts[h - 1], pts[i - 1], pts[j - 1]])
        if w3.is_zero():
            triples_ok = False
        elif not u_wedges[i].is_zero() and not w3.proportional(u_wedges[i]):
            triples_ok = False

    C = {i: C_map(pts[i - 1], pts[i]) for i in range(1, m)}
    return ChainAnalysis(records=list(records), rows=rows, I=I,
                         collapses=collapses, C=C,
                         middle_equalities_ok=middles_ok,
                         basis_triples_ok=triples_ok)


# --- C_{i,j} tables ----------------------------------------------------------

@dataclass
class CijEntry:
    i: int
    j: int
    c_ij: Pair
    c_ji: Pair
    status: str                   # "proportional" | "not_proportional" | "degenerate"
    b: Optional[Fraction]         # C_{i,j} = b C_i when proportional
    b_is_integer: Optional[bool]
    ratio_b_vs_growth: Optional[Fraction]   # |b| X_{i+1} / X_j


@dataclass
class CijTable:
    entries: List[CijEntry]
    dets: List[Tuple[int, int, int, int]]   # (j, k, det(C_j, C_k), is_zero)


def cij_table(records: Sequence[MinimalPointRecord], chain: ChainAnalysis,
              pairs: Optional[Sequence[Tuple[int, int]]] = None) -> CijTable:
    """C_{i,j} data for consecutive-in-I pairs and det(C_j, C_k) for
    consecutive I-triples."""
    pts = [r.x for r in records]
    consecutive = chain.consecutive_I_pairs()
    if pairs is None:
        pairs = consecutive
    else:
        for p in pairs:
            if tuple(p) not in consecutive:
                raise IndexNotInI(f"{p} is not a consecutive pair of I = {chain.I}")
    entries = []
    for i, j in pairs:
        c_ij = C_map(pts[i - 1], pts[j - 1])
        c_ji = C_map(pts[j - 1], pts[i - 1])
        c_i = chain.C[i]
        if c_i == (0, 0):
            entries.append(CijEntry(i, j, c_ij, c_ji, "degenerate",
                                    None, None, None))
            continue
        if det2(c_ij, c_i) != 0:
            entries.append(CijEntry(i, j, c_ij, c_ji, "not_proportional",
                                    None, None, None))
            continue
        ref = 0 if c_i[0] != 0 else 1
        b = Fraction(c_ij[ref], c_i[ref])
        ratio = None
        if b != 0:
            ratio = abs(b) * Fraction(records[i].X, records[j - 1].X)
        entries.append(CijEntry(i, j, c_ij, c_ji, "proportional", b,
                                b.denominator == 1, ratio))
    dets = []
    for i, j, k in zip(chain.I, chain.I[1:], chain.I[2:]):
        d = det2(chain.C[j], chain.C[k])
        dets.append((j, k, d, int(d == 0)))
    return CijTable(entries=entries, dets=dets)


# --- Schmidt-type height audit ------------------------------------------------

def _intersection_height(bv: Sequence[Sequence[int]], bw: Sequence[Sequence[int]],
                         dim: int = 4) -> int:
    """H(V cap W) through the double orthogonal complement; 1 for {0}."""
    kv = integer_kernel(hnf([list(v) for v in bv]), dim)
    kw = integer_kernel(hnf([list(w) for w in bw]), dim)
    inter = integer_kernel(kv + kw, dim)
    if not inter:
        return 1
    return wedge(inter).norm()


@dataclass
class SchmidtAudit:
    raw_rows: List[Tuple[int, Fraction]]         # (i, Schmidt product for W_i, W_{i+1})
    prop_ii_rows: List[Tuple[int, Fraction]]     # X_i H(U_i) / (H(W_i) H(W_{i+1}))
    prop_iii_rows: List[Tuple[int, int, Fraction]]
    max_raw: Optional[Fraction]
    max_ii: Optional[Fraction]
    max_iii: Optional[Fraction]


def schmidt_raw_ratio(basis_v: Sequence[Sequence[int]],
                      basis_w: Sequence[Sequence[int]], dim: int = 4) -> Fraction:
    """H(V cap W) H(V + W) / (H(V) H(W)), exactly."""
    hv = subspace_height(basis_v)
    hw = subspace_height(basis_w)
    hi = _intersection_height(basis_v, basis_w, dim)
    hs = subspace_height([list(v) for v in basis_v] + [list(w) for w in basis_w])
    return Fraction(hi * hs, hv * hw)


def schmidt_audit(chain: ChainAnalysis) -> SchmidtAudit:
    pts = [r.x for r in chain.records]
    m = len(pts)
    raw = []
    for i in range(2, m):
        if chain.rows[i].dim_w != 2 or chain.rows[i + 1].dim_w != 2:
            continue
        ratio = schmidt_raw_ratio([pts[i - 2], pts[i - 1]], [pts[i - 1], pts[i]])
        raw.append((i, ratio))
    rows_ii = []
    for i in chain.I:
        row = chain.rows[i]
        if row.h_u is None or row.h_w is None or chain.rows[i + 1].h_w is None:
            continue
        ratio = Fraction(chain.records[i - 1].X * row.h_u,
                         row.h_w * chain.rows[i + 1].h_w)
        rows_ii.append((i, ratio))
    rows_iii = []
    for i, j in chain.consecutive_I_pairs():
        if not chain.rows[i].in_J:
            continue
        hu_i, hu_j = chain.rows[i].h_u, chain.rows[j].h_u
        hw_j = chain.rows[j].h_w
        if hu_i and hu_j and hw_j:
            rows_iii.append((i, j, Fraction(hw_j, hu_i * hu_j)))
    return SchmidtAudit(
        raw_rows=raw, prop_ii_rows=rows_ii, prop_iii_rows=rows_iii,
        max_raw=max((r for _, r in raw), default=None),
        max_ii=max((r for _, r in rows_ii), default=None),
        max_iii=max((r for _, _, r in rows_iii), default=None),
    )


# --- exponent report -----------------------------------------------------------

def _digits_interval(record: MinimalPointRecord) -> Tuple[Fraction, Fraction]:
    """The certified enclosure [D, D + ulp] encoded by the digit string."""
    s = record.L_digits
    d = Fraction(s)
    if "." in s:
        ulp = Fraction(1, 10 ** len(s.split(".")[1]))
    else:
        ulp = Fraction(1)
    return d, d + ulp


def _iv_from_fractions(lo: Fraction, hi: Fraction):
    """Outward-safe mpmath interval covering [lo, hi]."""
    a = mpmath.iv.mpf(lo.numerator) / mpmath.iv.mpf(lo.denominator)
    b = mpmath.iv.mpf(hi.numerator) / mpmath.iv.mpf(hi.denominator)
    return mpmath.iv.mpf([a.a, b.b])


@dataclass
class ExponentRow:
    i: int
    X: int
    X_next: Optional[int]
    uniform: Optional[Tuple[float, float]]    # log(1/L_i)/log X_{i+1}
    ordinary: Optional[Tuple[float, float]]   # log(1/L_i)/log X_i
    dirichlet: Optional[Tuple[float, float]]  # L_i X_{i+1}^{1/n}


@dataclass
class ExponentReport:
    n: int
    rows: List[ExponentRow]
    window: int
    windowed_uniform_min: Optional[float]
    windowed_uniform_max: Optional[float]
    dirichlet_max: Optional[float]


def exponent_report(records: Sequence[MinimalPointRecord], n: int,
                    window: int = 10) -> ExponentReport:
    if len(records) < 2:
        raise TooFewRecords("exponent report needs at least 2 records")
    old_prec = mpmath.iv.prec
    mpmath.iv.prec = 160
    try:
        rows: List[ExponentRow] = []
        uniform_his: List[Tuple[float, float]] = []
        diri_max = None
        for k, rec in enumerate(records):
            x_next = records[k + 1].X if k + 1 < len(records) else None
            lo, hi = _digits_interval(rec)
            l_iv = _iv_from_fractions(lo, hi)
            uniform = ordinary = dirichlet = None
            if x_next is not None:
                log_inv_l = -mpmath.iv.log(l_iv)
                ratio = log_inv_l / mpmath.iv.log(mpmath.iv.mpf(x_next))
                uniform = (float(mpmath.mpf(ratio.a)), float(mpmath.mpf(ratio.b)))
                uniform_his.append(uniform)
                d = l_iv * mpmath.iv.mpf(x_next) ** (mpmath.iv.mpf(1) / n)
                dirichlet = (float(mpmath.mpf(d.a)), float(mpmath.mpf(d.b)))
                if diri_max is None or dirichlet[1] > diri_max:
                    diri_max = dirichlet[1]
            if rec.X > 1:
                ratio = -mpmath.iv.log(l_iv) / mpmath.iv.log(mpmath.iv.mpf(rec.X))
                ordinary = (float(mpmath.mpf(ratio.a)), float(mpmath.mpf(ratio.b)))
            rows.append(ExponentRow(i=rec.index, X=rec.X, X_next=x_next,
                                    uniform=uniform, ordinary=ordinary,
                                    dirichlet=dirichlet))
        tail = uniform_his[-window:]
        wmin = min((u[0] for u in tail), default=None)
        wmax = max((u[1] for u in tail), default=None)
        return ExponentReport(n=n, rows=rows, window=window,
                              windowed_uniform_min=wmin,
                              windowed_uniform_max=wmax,
                              dirichlet_max=diri_max)
    finally:
        mpmath.iv.prec = old_prec


# --- hypothesis scan -----------------------------------------------------------

@dataclass
class HypothesisScan:
    lam: Fraction
    c: Fraction
    results: List[Tuple[int, Optional[bool]]]  # (X, satisfied / None inconclusive)
    first_failure: Optional[int]


def hypothesis_scan(records: Sequence[MinimalPointRecord], lam, c,
                    x_grid: Sequence[int], scan_bound: Optional[int] = None,
                    ) -> HypothesisScan:
    """For each grid X, does the record active at scale X (the one whose
    [X_k, X_{k+1}) window contains X) satisfy L_k <= c X^-lam?  Decided as
    L_k^q X^p <= c^q for lam = p/q, from the certified digit enclosures."""
    lam, c = Fraction(lam), Fraction(c)
    if lam < 0 or c <= 0:
        raise ValueError("need lam >= 0 and c > 0")
    if not records:
        raise GridOutOfRange("no records")
    xs = [r.X for r in records]
    hi_cover = scan_bound if scan_bound is not None else xs[-1]
    results: List[Tuple[int, Optional[bool]]] = []
    first_failure = None
    p, q = lam.numerator, lam.denominator
    for X in x_grid:
        if X < xs[0] or X > hi_cover:
            raise GridOutOfRange(f"X={X} outside covered range [{xs[0]}, {hi_cover}]")
        k = _window_index(xs, X)
        lo, hi = _digits_interval(records[k])
        lhs_lo = lo ** q * X ** p
        lhs_hi = hi ** q * X ** p
        rhs = c ** q
        verdict: Optional[bool]
        if lhs_hi <= rhs:
            verdict = True
        elif lhs_lo > rhs:
            verdict = False
        else:
            verdict = None
        results.append((X, verdict))
        if verdict is False and first_failure is None:
            first_failure = X
    return HypothesisScan(lam=lam, c=c, results=results, first_failure=first_failure)


def _window_index(xs: List[int], X: int) -> int:
    lo, hi = 0, len(xs) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if xs[mid] <= X:
            lo = mid
        else:
            hi = mid - 1
    return lo


# --- CSV output ----------------------------------------------------------------

def write_chain_csv(chain: ChainAnalysis, path: str) -> None:
    lines = ["# i, in_I, in_J, H_W, H_U, primitive, dim_W"]
    for i in sorted(chain.rows):
        r = chain.rows[i]
        lines.append(",".join(str(v if v is not None else "") for v in (
            r.i, _tri(r.in_I), _tri(r.in_J), r.h_w, r.h_u, _tri(r.w_primitive),
            r.dim_w)))
    _write(path, lines)


def write_cij_csv(table: CijTable, path: str) -> None:
    lines = ["# i, j, Cij_minus, Cij_plus, Cji_minus, Cji_plus, status, b, "
             "b_integer, b_ratio",
             ]
    for e in table.entries:
        lines.append(",".join(str(v if v is not None else "") for v in (
            e.i, e.j, e.c_ij[0], e.c_ij[1], e.c_ji[0], e.c_ji[1], e.status,
            e.b, _tri(e.b_is_integer), e.ratio_b_vs_growth)))
    lines.append("# j, k, det(C_j, C_k), is_zero")
    for j, k, d, z in table.dets:
        lines.append(f"{j},{k},{d},{z}")
    _write(path, lines)


def write_schmidt_csv(audit: SchmidtAudit, path: str) -> None:
    lines = ["# kind, i, j, ratio (exact rational), ratio_float"]
    for i, r in audit.raw_rows:
        lines.append(f"raw,{i},,{r},{float(r):.12g}")
    for i, r in audit.prop_ii_rows:
        lines.append(f"prop_ii,{i},,{r},{float(r):.12g}")
    for i, j, r in audit.prop_iii_rows:
        lines.append(f"prop_iii,{i},{j},{r},{float(r):.12g}")
    _write(path, lines)


def write_exponents_csv(report: ExponentReport, path: str) -> None:
    lines = ["# i, X, X_next, uniform_lo, uniform_hi, ordinary_lo, ordinary_hi, "
             "dirichlet_lo, dirichlet_hi"]
    for r in report.rows:
        vals = [r.i, r.X, r.X_next if r.X_next is not None else ""]
        for pair in (r.uniform, r.ordinary, r.dirichlet):
            vals.extend(["", ""] if pair is None else [f"{pair[0]:.12g}", f"{pair[1]:.12g}"])
        lines.append(",".join(str(v) for v in vals))
    lines.append(f"# windowed_uniform_min={report.windowed_uniform_min}"
                 f" windowed_uniform_max={report.windowed_uniform_max}"
                 f" dirichlet_max={report.dirichlet_max} window={report.window}")
    _write(path, lines)


def _tri(v: Optional[bool]) -> str:
    return "" if v is None else ("1" if v else "0")


def _write(path: str, lines: List[str]) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
