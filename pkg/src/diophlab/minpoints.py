"""Minimal points of xi in Z^(n+1): certified fast scanner plus the
brute-force oracle that re-derives the sequence from the definition.

A record is emitted at x0 whenever the best point with that first coordinate
(companions = nearest integers to x0 xi^i) has strictly smaller L than every
earlier record; the first scanned x0 = 1 always starts the sequence.  The
engine prefilters with wraparound 64-bit fixed point (numpy, exact modular
arithmetic, error radius x0 from the scaled-power floors), confirms survivors
at DIOPHLAB_PRECISION_BITS fixed point, and settles every record claim and
every tie with exact algebraic comparisons, so output never depends on the
numeric path.  The x0 range may be split into contiguous shards scanned
independently; a sequential merge replays shard-local candidates in x0 order,
making the output bit-identical for every shard count.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (DegreeTooSmall, MismatchFound, RationalInput, XiOutOfRange,
                     ZeroPoint)
from .exactreal import AlgebraicReal, make_algebraic
from .intervals import Interval, decimal_string
from .latgeom import compare_L, is_primitive, l_forms, l_value, sup_norm
from . import polys

IntVec = Tuple[int, ...]

DEFAULT_MID_BITS = 128
_ROUND_BITS = 256
_BLOCK = 1 << 20


def _mid_bits_from_env() -> int:
    try:
        return max(64, int(os.environ.get("DIOPHLAB_PRECISION_BITS", DEFAULT_MID_BITS)))
    except ValueError:
        return DEFAULT_MID_BITS


class PowerTable:
    """floor(xi^i * 2^F) for i = 1..n at the precisions the scanner uses."""

    def __init__(self, xi: AlgebraicReal, n: int, mid_bits: int):
        self.xi = xi
        self.n = n
        self.mid_bits = mid_bits
        self.s64 = tuple(scaled_floor(xi, i, 64) for i in range(1, n + 1))
        self.smid = tuple(scaled_floor(xi, i, mid_bits) for i in range(1, n + 1))
        self.s_round = tuple(scaled_floor(xi, i, _ROUND_BITS) for i in range(1, n + 1))


def scaled_floor(xi: AlgebraicReal, power: int, bits: int) -> int:
    """Certified floor(xi^power * 2^bits)."""
    scale = 1 << bits
    b = bits + 16
    while True:
        iv = xi.refine_bits(b) ** power
        lo = (iv.lo.numerator * scale) // iv.lo.denominator
        hi = (iv.hi.numerator * scale) // iv.hi.denominator
        if lo == hi:
            return lo
        b *= 2


def check_canonical_range(xi: AlgebraicReal) -> None:
    """Certify 0 < xi < 1 (irrational values only reach this point)."""
    bits = 64
    while True:
        iv = xi.refine_bits(bits)
        if iv.lo > 0 and iv.hi < 1:
            return
        if iv.hi < 0 or iv.lo > 1 or (iv.lo > 0 and iv.lo >= 1) or iv.hi <= 0:
            raise XiOutOfRange(f"xi must lie in (0,1); enclosure {iv}")
        bits *= 2
        if bits > 1 << 14:
            raise XiOutOfRange("xi is not certifiably inside (0,1)")


def canonicalize_xi(xi: AlgebraicReal) -> Tuple[AlgebraicReal, int]:
    """(xi - floor(xi), floor(xi)); the defining polynomial is shifted
    accordingly.  Rational input is refused."""
    if xi.is_rational():
        raise RationalInput("minimal points need an irrational xi")
    bits = 64
    while True:
        iv = xi.refine_bits(bits)
        k_lo = iv.lo.numerator // iv.lo.denominator
        k_hi = iv.hi.numerator // iv.hi.denominator
        if k_lo == k_hi:
            k = k_lo
            break
        bits *= 2
    if k == 0:
        return xi, 0
    shifted = polys.shift(xi.poly, k)
    iv = xi.enclosure()
    return make_algebraic(shifted, (iv.lo - k, iv.hi - k)), k


def _round_scaled(value: int, bits: int) -> int:
    return (value + (1 << (bits - 1))) >> bits


def best_for_x0(x0: int, xi: AlgebraicReal, n: int,
                powers: Optional[PowerTable] = None) -> IntVec:
    """(x0, round(x0 xi), ..., round(x0 xi^n)): the point minimizing L among
    points with first coordinate x0.  Rounding is certified; ties at a half
    integer cannot occur for irrational xi of degree > n."""
    if x0 < 1:
        raise XiOutOfRange("x0 must be a positive integer")
    if powers is None:
        check_canonical_range(xi)
        powers = PowerTable(xi, n, _mid_bits_from_env())
    coords = [x0]
    for i in range(1, n + 1):
        v = x0 * powers.s_round[i - 1]
        r = _round_scaled(v, _ROUND_BITS)
        if _round_scaled(v + x0, _ROUND_BITS) != r:
            r = _round_exact(x0, xi, i)
        coords.append(r)
    return tuple(coords)


def _round_exact(x0: int, xi: AlgebraicReal, power: int) -> int:
    bits = _ROUND_BITS
    while True:
        iv = xi.refine_bits(bits) ** power
        lo = (2 * x0 * iv.lo.numerator + iv.lo.denominator) // (2 * iv.lo.denominator)
        hi = (2 * x0 * iv.hi.numerator + iv.hi.denominator) // (2 * iv.hi.denominator)
        if lo == hi:
            return lo
        bits *= 2


@dataclass(frozen=True)
class MinimalPointRecord:
    index: int                 # 1-based position in the sequence
    x: IntVec
    X: int                     # sup-norm, equal to x0 over the canonical range
    L_digits: str              # 30 certified significant digits of L
    argmax: int                # 1-based index attaining L (exact)
    primitive: bool
    x0_next: Optional[int]     # first coordinate of the next record, if known

    def to_json_line(self) -> str:
        # x0_next stays in memory: on disk it is the next line's X, which
        # keeps the records file append-only under resumption.
        obj = {
            "i": self.index,
            "x": [str(c) for c in self.x],
            "X": str(self.X),
            "L": self.L_digits,
            "argmax": self.argmax,
            "primitive": self.primitive,
        }
        return json.dumps(obj, separators=(",", ":"))

    @staticmethod
    def from_json_line(line: str) -> "MinimalPointRecord":
        obj = json.loads(line)
        return MinimalPointRecord(
            index=int(obj["i"]),
            x=tuple(int(c) for c in obj["x"]),
            X=int(obj["X"]),
            L_digits=obj["L"],
            argmax=int(obj["argmax"]),
            primitive=bool(obj["primitive"]),
            x0_next=None,
        )


def records_to_jsonl(records: Sequence[MinimalPointRecord]) -> str:
    return "".join(r.to_json_line() + "\n" for r in records)


def read_records_jsonl(text: str) -> List[MinimalPointRecord]:
    records = [MinimalPointRecord.from_json_line(line)
               for line in text.splitlines() if line.strip()]
    return link_successors(records)


def link_successors(records: Sequence[MinimalPointRecord]) -> List[MinimalPointRecord]:
    """Fill x0_next from each successor's X (the scan emits records at their
    first coordinate, which equals the sup-norm over the canonical range)."""
    out = []
    for k, r in enumerate(records):
        nxt = records[k + 1].X if k + 1 < len(records) else None
        out.append(MinimalPointRecord(index=r.index, x=r.x, X=r.X,
                                      L_digits=r.L_digits, argmax=r.argmax,
                                      primitive=r.primitive, x0_next=nxt))
    return out


def l_digits(x: Sequence[int], xi: AlgebraicReal, digits: int = 30) -> str:
    """Certified `digits`-significant-digit decimal truncation of L(x)."""
    width = Fraction(1, 10 ** (digits + 2))
    while True:
        iv, _ = l_value(x, xi, width)
        try:
            return decimal_string(iv, digits)
        except Exception:
            width /= 10 ** 4


# --- the scanning engine -----------------------------------------------------


def _validate_scan_args(xi: AlgebraicReal, n: int) -> None:
    if n not in (1, 2, 3):
        raise DegreeTooSmall("n must be 1, 2 or 3")
    if xi.degree <= n:
        raise DegreeTooSmall(
            f"deg(xi) = {xi.degree} <= n = {n}: the record sequence would terminate")
    check_canonical_range(xi)


class _ShardScanner:
    """Scans a contiguous x0 range, reporting every point whose L beats all
    earlier points of the same shard (shard-local records)."""

    def __init__(self, xi: AlgebraicReal, n: int, powers: PowerTable):
        self.xi = xi
        self.n = n
        self.powers = powers
        self.record_point: Optional[IntVec] = None
        self._thr64: Optional[int] = None       # stage-1 threshold numerator
        self._rec_mid: Optional[Tuple[int, int]] = None  # scaled L bounds at mid_bits
        self.candidates: List[Tuple[int, IntVec]] = []

    def _set_record(self, x0: int, point: IntVec) -> None:
        self.record_point = point
        self.candidates.append((x0, point))
        width = Fraction(1, 1 << (self.powers.mid_bits + 32))
        iv, _ = l_value(point, self.xi, width)
        mid_scale = 1 << self.powers.mid_bits
        lo = (iv.lo.numerator * mid_scale) // iv.lo.denominator
        hi = -((-iv.hi.numerator * mid_scale) // iv.hi.denominator)
        self._rec_mid = (lo, hi + 1)
        scale64 = 1 << 64
        self._thr64 = -((-iv.hi.numerator * scale64) // iv.hi.denominator) + 1

    def _mid_reject(self, x0: int) -> bool:
        """True when the mid-precision test certifies 'not a record'."""
        if self._rec_mid is None:
            return False
        mid_bits = self.powers.mid_bits
        mask = (1 << mid_bits) - 1
        half = 1 << (mid_bits - 1)
        rec_hi = self._rec_mid[1]
        for s in self.powers.smid:
            v = (x0 * s) & mask
            d = v if v < half else (mask + 1 - v)
            if d - x0 >= rec_hi:
                return True
        return False

    def _consider(self, x0: int) -> None:
        if self._mid_reject(x0):
            return
        point = best_for_x0(x0, self.xi, self.n, self.powers)
        if self.record_point is None or compare_L(point, self.record_point, self.xi) < 0:
            self._set_record(x0, point)

    def scan(self, start: int, stop: int) -> None:
        """Scan x0 in [start, stop)."""
        s1 = np.uint64(self.powers.s64[0])
        for block_lo in range(start, stop, _BLOCK):
            block_hi = min(block_lo + _BLOCK, stop)
            if self._thr64 is None:
                # no record yet: the first point of the range always qualifies
                self._consider(block_lo)
                if block_lo + 1 < block_hi:
                    self._scan_block(block_lo + 1, block_hi, s1)
            else:
                self._scan_block(block_lo, block_hi, s1)

    def _scan_block(self, lo: int, hi: int, s1: np.uint64) -> None:
        thr = self._thr64 + hi  # error radius folded in once per block
        if thr >= (1 << 64):
            for x0 in range(lo, hi):
                self._consider(x0)
            return
        x0s = np.arange(lo, hi, dtype=np.uint64)
        f = x0s * s1
        d = np.minimum(f, np.uint64(0) - f)
        idx = np.nonzero(d < np.uint64(thr))[0]
        pending = idx.tolist()
        pos = 0
        while pos < len(pending):
            before = self._thr64
            self._consider(lo + pending[pos])
            pos += 1
            if self._thr64 != before and len(pending) - pos > 4096:
                # threshold dropped: refilter the remaining tail
                tail = np.asarray(pending[pos:], dtype=np.int64)
                sub = d[tail]
                keep = np.nonzero(sub < np.uint64(min(self._thr64 + hi, (1 << 64) - 1)))[0]
                pending = pending[:pos] + tail[keep].tolist()


def _scan_range(xi_data: tuple, n: int, start: int, stop: int, mid_bits: int):
    poly, lo, hi = xi_data
    xi = make_algebraic(poly, (Fraction(lo), Fraction(hi)))
    scanner = _ShardScanner(xi, n, PowerTable(xi, n, mid_bits))
    scanner.scan(start, stop)
    return scanner.candidates


def _shard_ranges(start: int, stop: int, shards: int) -> List[Tuple[int, int]]:
    total = stop - start
    if total <= 0:
        return []
    shards = max(1, min(shards, total))
    step = total // shards
    bounds = [start + i * step for i in range(shards)] + [stop]
    return [(bounds[i], bounds[i + 1]) for i in range(shards)]


def scan_candidates(xi: AlgebraicReal, n: int, start: int, stop: int,
                    shards: int = 1, mid_bits: Optional[int] = None,
                    ) -> List[Tuple[int, IntVec]]:
    """Shard-local record candidates over [start, stop), in x0 order."""
    mid_bits = mid_bits or _mid_bits_from_env()
    xi_data = (xi.poly, str(xi.lo), str(xi.hi))
    ranges = _shard_ranges(start, stop, shards)
    if len(ranges) <= 1:
        out = []
        for a, b in ranges:
            out.extend(_scan_range(xi_data, n, a, b, mid_bits))
        return out
    results = []
    with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
        futures = [pool.submit(_scan_range, xi_data, n, a, b, mid_bits)
                   for a, b in ranges]
        for fut in futures:
            results.extend(fut.result())
    return results


def _merge_candidates(candidates: List[Tuple[int, IntVec]], xi: AlgebraicReal,
                      record_point: Optional[IntVec] = None,
                      ) -> List[Tuple[int, IntVec]]:
    """Replay shard candidates in x0 order against the global record."""
    out = []
    for x0, point in candidates:
        if record_point is None or compare_L(point, record_point, xi) < 0:
            out.append((x0, point))
            record_point = point
    return out


def _enrich(winners: List[Tuple[int, IntVec]], xi: AlgebraicReal,
            first_index: int = 1) -> List[MinimalPointRecord]:
    records = []
    for k, (x0, point) in enumerate(winners):
        x0_next = winners[k + 1][0] if k + 1 < len(winners) else None
        _, argmax = l_value(point, xi, Fraction(1, 2 ** 64))
        records.append(MinimalPointRecord(
            index=first_index + k,
            x=point,
            X=sup_norm(point),
            L_digits=l_digits(point, xi),
            argmax=argmax,
            primitive=is_primitive(point),
            x0_next=x0_next,
        ))
    return records


def enumerate_minimal_points(xi: AlgebraicReal, n: int,
                             x0_max: Optional[int] = None,
                             count: Optional[int] = None,
                             shards: int = 1,
                             mid_bits: Optional[int] = None,
                             ) -> List[MinimalPointRecord]:
    """The record sequence for x0 = 1..x0_max, or the first `count` records."""
    _validate_scan_args(xi, n)
    if (x0_max is None) == (count is None):
        raise ValueError("specify exactly one of x0_max, count")
    if x0_max is not None:
        if x0_max < 1:
            raise ValueError("x0_max must be >= 1")
        candidates = scan_candidates(xi, n, 1, x0_max + 1, shards, mid_bits)
        winners = _merge_candidates(candidates, xi)
        return _enrich(winners, xi)
    if count < 1:
        raise ValueError("count must be >= 1")
    winners: List[Tuple[int, IntVec]] = []
    lo, hi = 1, 1 + max(16, 4 * count)
    while True:
        candidates = scan_candidates(xi, n, lo, hi, shards, mid_bits)
        rec = winners[-1][1] if winners else None
        winners.extend(_merge_candidates(candidates, xi, rec))
        if len(winners) >= count:
            return _enrich(winners[:count], xi)
        lo, hi = hi, hi + (hi - 1) * 4


def continue_scan(records: Sequence[MinimalPointRecord], xi: AlgebraicReal,
                  n: int, start_x0: int, new_max: int, shards: int = 1,
                  mid_bits: Optional[int] = None) -> List[MinimalPointRecord]:
    """Extend a previous scan over [start_x0, new_max]; returns only the new
    records, with indices continuing the old ones.  Output equals the tail a
    fresh scan to new_max would produce."""
    _validate_scan_args(xi, n)
    if new_max < start_x0:
        return []
    rec_point = records[-1].x if records else None
    first_index = records[-1].index + 1 if records else 1
    candidates = scan_candidates(xi, n, start_x0, new_max + 1, shards, mid_bits)
    winners = _merge_candidates(candidates, xi, rec_point)
    return _enrich(winners, xi, first_index=first_index)


# --- brute-force oracle ------------------------------------------------------


@dataclass
class OracleReport:
    checked_to: int
    n_records: int
    properties_ok: bool


def derive_records_bruteforce(xi: AlgebraicReal, n: int, x0_bound: int,
                              ) -> List[MinimalPointRecord]:
    """The record sequence straight from the definition: every x0 visited,
    every comparison settled exactly (interval shortcut with exact fallback),
    no thresholded candidate machinery."""
    _validate_scan_args(xi, n)
    bits = 192
    table = [scaled_floor(xi, i, bits) for i in range(1, n + 1)]
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    powers = PowerTable(xi, n, _mid_bits_from_env())
    winners: List[Tuple[int, IntVec]] = []
    rec_point: Optional[IntVec] = None
    rec_lo = rec_hi = None
    for x0 in range(1, x0_bound + 1):
        dmax = 0
        for s in table:
            v = (x0 * s) & mask
            d = v if v < half else (mask + 1 - v)
            if d > dmax:
                dmax = d
        if rec_point is not None and dmax - x0 >= rec_hi:
            continue
        point = best_for_x0(x0, xi, n, powers)
        if rec_point is None or compare_L(point, rec_point, xi) < 0:
            winners.append((x0, point))
            rec_point = point
            iv, _ = l_value(point, xi, Fraction(1, 1 << (bits + 16)))
            scale = 1 << bits
            rec_lo = (iv.lo.numerator * scale) // iv.lo.denominator
            rec_hi = -((-iv.hi.numerator * scale) // iv.hi.denominator) + 1
    return _enrich(winners, xi)


def verify_minimality_oracle(records: Sequence[MinimalPointRecord],
                             xi: AlgebraicReal, n: int, x0_bound: int,
                             ) -> OracleReport:
    """Re-derive the records up to x0_bound by definition and compare with
    the given list; also re-checks the sequence properties (norms strictly
    increasing, L strictly decreasing, primitivity, sup-norm = x0)."""
    oracle = derive_records_bruteforce(xi, n, x0_bound)
    given = [r for r in records if r.X <= x0_bound]
    for k in range(max(len(oracle), len(given))):
        if k >= len(given):
            raise MismatchFound(
                f"record {oracle[k].index} at x0={oracle[k].X} missing from input")
        if k >= len(oracle):
            raise MismatchFound(
                f"input has spurious record index {given[k].index} at x0={given[k].X}")
        a, b = oracle[k], given[k]
        same_next = (a.x0_next == b.x0_next) or (a.x0_next is None)
        if not (a.index == b.index and a.x == b.x and a.X == b.X
                and a.L_digits == b.L_digits and a.argmax == b.argmax
                and a.primitive == b.primitive and same_next):
            raise MismatchFound(f"divergence at record index {a.index}: "
                                f"oracle {a} vs input {b}")
    ok = _check_sequence_properties(oracle, xi, n)
    return OracleReport(checked_to=x0_bound, n_records=len(oracle), properties_ok=ok)


def _check_sequence_properties(records: Sequence[MinimalPointRecord],
                               xi: AlgebraicReal, n: int) -> bool:
    half = Fraction(1, 2)
    for k, r in enumerate(records):
        if not is_primitive(r.x):
            raise MismatchFound(f"record {r.index} is not primitive")
        if r.X != abs(r.x[0]):
            iv, _ = l_value(r.x, xi, Fraction(1, 2 ** 64))
            if iv.hi < half:
                raise MismatchFound(f"record {r.index}: sup-norm differs from x0")
        if k > 0:
            if records[k - 1].X >= r.X:
                raise MismatchFound(f"norms not strictly increasing at {r.index}")
            if compare_L(r.x, records[k - 1].x, xi) >= 0:
                raise MismatchFound(f"L not strictly decreasing at {r.index}")
    return True
