"""Command-line surface.

Exit codes: 0 success, 2 validation error, 3 verification failure, 4 I/O.
Every scan/analysis run writes its RunConfig next to the outputs, and equal
configs reproduce byte-identical outputs, parallel runs included.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from . import constants as constants_mod
from . import maps, structure
from .errors import (DiophlabError, MismatchFound, PrecisionError,
                     ResidualTooLarge)
from .exactreal import AlgebraicReal, make_algebraic
from .intervals import decimal_string
from .latgeom import laplace_delta_expand
from .minpoints import (canonicalize_xi, check_canonical_range, continue_scan,
                        enumerate_minimal_points, link_successors,
                        read_records_jsonl, records_to_jsonl,
                        verify_minimality_oracle)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFICATION = 3
EXIT_IO = 4

PRESETS = {
    "sqrt2": ((-2, 0, 1), (1, 2)),
    "2^(1/4)": ((-2, 0, 0, 0, 1), (1, 2)),
    "2^(1/3)": ((-2, 0, 0, 1), (1, 2)),
}


def parse_xi_spec(spec: str) -> AlgebraicReal:
    if spec in PRESETS:
        poly, iv = PRESETS[spec]
        return make_algebraic(poly, iv)
    try:
        data = json.loads(spec)
        poly = [int(c) for c in data["poly"]]
        lo, hi = Fraction(data["lo"]), Fraction(data["hi"])
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise DiophlabError(
            f"xi spec must be a preset ({', '.join(PRESETS)}) or JSON "
            f'{{"poly": [...], "lo": "p/q", "hi": "p/q"}}: {exc}')
    return make_algebraic(poly, (lo, hi))


def _canonical_xi(spec: str) -> tuple:
    """(canonical xi in (0,1), shift, original json)."""
    xi = parse_xi_spec(spec)
    original = xi.to_json()
    canonical, shift = canonicalize_xi(xi)
    if shift:
        print(f"warning: xi shifted into (0,1); minimal points are computed "
              f"for xi' = xi - {shift}", file=sys.stderr)
    check_canonical_range(canonical)
    return canonical, shift, original


@dataclass
class RunConfig:
    command: str
    xi_input: Optional[dict] = None
    xi: Optional[dict] = None
    shift: int = 0
    n: int = 0
    x0_max: Optional[str] = None
    count: Optional[int] = None
    shards: int = 1
    seed: Optional[int] = None
    precision_bits: int = 128
    hyp_lambda: Optional[str] = None
    hyp_c: Optional[str] = None
    out: Optional[str] = None

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=1, sort_keys=True)
            fh.write("\n")


# --- constants ----------------------------------------------------------------

def cmd_constants(args) -> int:
    consts = constants_mod.build_constants()
    width = Fraction(1, 10 ** (args.digits + 6))
    values = {}
    for name, expr in consts.named_values().items():
        values[name] = decimal_string(expr.enclosure(width), args.digits)
    if args.verify is not None:
        tol = Fraction(args.verify)
        try:
            rows = constants_mod.verify_identities(consts, tol)
        except ResidualTooLarge as exc:
            print(f"identity verification FAILED: {exc}", file=sys.stderr)
            return EXIT_VERIFICATION
        for name, residual in rows:
            print(f"identity {name:28s} residual <= {float(residual):.3e}")
        print(f"all {len(rows)} identities below {float(tol):.1e}")
    if args.json:
        payload = {
            "digits": args.digits,
            "values": values,
            "defining_polynomials": {
                "gamma": [str(c) for c in consts.gamma.poly],
                "lambda2": [str(c) for c in consts.lambda2.poly],
                "lambda3": [str(c) for c in consts.lambda3.poly],
            },
        }
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        for name, val in values.items():
            print(f"{name:28s} {val}")
    return EXIT_OK


# --- identity fuzzing -----------------------------------------------------------

def _fuzz_trial(rng: random.Random, bound: int, identity: str) -> dict:
    """One randomized exact-identity check; returns a JSONL-able row."""
    def pt(k=4):
        return tuple(rng.randint(-bound, bound) for _ in range(k))

    ok = True
    witness = None
    if identity == "laplace":
        n = rng.choice([1, 2, 3])
        rows = [pt(n + 1) for _ in range(n + 1)]
        lhs, rhs = laplace_delta_expand(rows)
        ok = lhs == rhs
        witness = {"rows": rows} if not ok else None
    elif identity == "e_map":
        w, w2, x, y = pt(), pt(), pt(), pt()
        s = tuple(a + b for a, b in zip(w, w2))
        ok = (maps.E_map(x, x, y) == tuple(2 * c for c in maps.C_map(x, y))
              and maps.E_map(x, y, y) == maps.E_map(y, x, y)
              == tuple(-c for c in maps.C_map(y, x))
              and maps.E_map(w, x, y) == maps.E_map(x, w, y)
              and maps.E_map(s, x, y) == tuple(
                  a + b for a, b in zip(maps.E_map(w, x, y), maps.E_map(w2, x, y))))
        witness = {"w": w, "x": x, "y": y} if not ok else None
    elif identity == "psi":
        x, y, z = pt(), pt(), pt()
        ok = all(l == r for sign in (-1, 1)
                 for l, r in [maps.psi_face_identity(sign, x, y, z)])
        witness = {"x": x, "y": y, "z": z} if not ok else None
    elif identity == "xi":
        x, y, z = pt(), pt(), pt()
        ok = maps.xi_identities_hold(x, y, z)
        witness = {"x": x, "y": y, "z": z} if not ok else None
    else:
        raise ValueError(identity)
    row = {"identity": identity, "ok": ok}
    if witness is not None:
        row["witness"] = witness
    return row


def cmd_verify_maps(args) -> int:
    if args.trials < 1:
        print("--trials must be >= 1", file=sys.stderr)
        return EXIT_VALIDATION
    rng = random.Random(args.seed)
    identities = ("laplace", "e_map", "psi", "xi")
    failures = 0
    sink = open(args.jsonl, "w") if args.jsonl else None
    try:
        for identity in identities:
            for t in range(args.trials):
                seed = rng.randrange(1 << 48)
                row = _fuzz_trial(random.Random(seed), args.coeff_bound, identity)
                row["seed"] = seed
                if sink:
                    sink.write(json.dumps(row, separators=(",", ":")) + "\n")
                if not row["ok"]:
                    failures += 1
                    print(f"FAIL {identity} seed={seed} witness={row.get('witness')}",
                          file=sys.stderr)
        print(f"{len(identities)}x{args.trials} trials, {failures} failures")
    finally:
        if sink:
            sink.close()
    return EXIT_OK if failures == 0 else EXIT_VERIFICATION


# --- scans and analysis ----------------------------------------------------------

def cmd_minpoints(args) -> int:
    if (args.max_x0 is None) == (args.count is None):
        print("specify exactly one of --max-x0 / --count", file=sys.stderr)
        return EXIT_VALIDATION
    xi, shift, original = _canonical_xi(args.xi)
    os.makedirs(args.out, exist_ok=True)
    records_path = os.path.join(args.out, "records.jsonl")
    cursor_path = os.path.join(args.out, "cursor.json")
    config = RunConfig(command="minpoints", xi_input=original, xi=xi.to_json(),
                       shift=shift, n=args.n,
                       x0_max=str(args.max_x0) if args.max_x0 else None,
                       count=args.count, shards=args.shards,
                       precision_bits=args.precision_bits, out=args.out)

    if args.max_x0 is not None and os.path.exists(records_path) \
            and os.path.exists(cursor_path):
        with open(records_path) as fh:
            old = read_records_jsonl(fh.read())
        with open(cursor_path) as fh:
            cursor = json.load(fh)
        next_x0 = int(cursor["next_x0"])
        if next_x0 > args.max_x0:
            print(f"already scanned to {next_x0 - 1}; nothing to do")
            return EXIT_OK
        new = continue_scan(old, xi, args.n, next_x0, args.max_x0,
                            shards=args.shards, mid_bits=args.precision_bits)
        with open(records_path, "a") as fh:
            fh.write(records_to_jsonl(new))
        records = link_successors(old + new)
    else:
        records = enumerate_minimal_points(
            xi, args.n, x0_max=args.max_x0, count=args.count,
            shards=args.shards, mid_bits=args.precision_bits)
        with open(records_path, "w") as fh:
            fh.write(records_to_jsonl(records))
    if args.max_x0 is not None:
        with open(cursor_path, "w") as fh:
            json.dump({"next_x0": str(args.max_x0 + 1),
                       "current_L_form": [str(c) for c in records[-1].x]}, fh)
            fh.write("\n")
    config.write(os.path.join(args.out, "config.json"))
    print(f"{len(records)} records -> {records_path}")
    return EXIT_OK


def _load_run(records_path: str):
    run_dir = os.path.dirname(os.path.abspath(records_path))
    with open(records_path) as fh:
        records = read_records_jsonl(fh.read())
    config_path = os.path.join(run_dir, "config.json")
    with open(config_path) as fh:
        config = json.load(fh)
    xi = AlgebraicReal.from_json(config["xi"])
    return records, config, xi


def cmd_analyze(args) -> int:
    records, config, xi = _load_run(args.records)
    n = config["n"]
    os.makedirs(args.out, exist_ok=True)
    report = structure.exponent_report(records, n, window=args.window)
    structure.write_exponents_csv(report, os.path.join(args.out, "exponents.csv"))
    wrote = ["exponents.csv"]
    if n == 3 and len(records) >= 3:
        chain = structure.chain_analyze(records, xi)
        structure.write_chain_csv(chain, os.path.join(args.out, "chain.csv"))
        table = structure.cij_table(records, chain)
        structure.write_cij_csv(table, os.path.join(args.out, "cij.csv"))
        audit = structure.schmidt_audit(chain)
        structure.write_schmidt_csv(audit, os.path.join(args.out, "schmidt.csv"))
        wrote += ["chain.csv", "cij.csv", "schmidt.csv"]
    if args.hyp_lambda is not None:
        lam, c = Fraction(args.hyp_lambda), Fraction(args.hyp_c or 1)
        grid = [int(v) for v in args.hyp_grid.split(",")] if args.hyp_grid else \
            [r.X for r in records]
        scan = structure.hypothesis_scan(records, lam, c, grid)
        path = os.path.join(args.out, "hypothesis.csv")
        lines = [f"# lambda={lam} c={c}; X, satisfied(1/0, empty=inconclusive)"]
        for X, verdict in scan.results:
            lines.append(f"{X},{'' if verdict is None else int(verdict)}")
        lines.append(f"# first_failure={scan.first_failure}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        wrote.append("hypothesis.csv")
    cfg = RunConfig(command="analyze", xi=config["xi"], n=n,
                    hyp_lambda=args.hyp_lambda, hyp_c=args.hyp_c, out=args.out)
    cfg.write(os.path.join(args.out, "analyze_config.json"))
    print("wrote " + ", ".join(wrote))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    records, config, xi = _load_run(args.records)
    try:
        report = verify_minimality_oracle(records, xi, config["n"], args.bound)
    except MismatchFound as exc:
        print(f"MISMATCH: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    print(f"oracle agrees to x0 <= {report.checked_to}: "
          f"{report.n_records} records, properties ok")
    return EXIT_OK


def cmd_prop43(args) -> int:
    if args.trials < 1:
        print("--trials must be >= 1", file=sys.stderr)
        return EXIT_VALIDATION
    rng = random.Random(args.seed)
    bound = args.coeff_bound
    from .latgeom import det_int, face_minus, face_plus, wedge
    failures = 0
    for _ in range(args.trials):
        while True:
            v, w, x, y = (tuple(rng.randint(-bound, bound) for _ in range(4))
                          for _ in range(4))
            if det_int([v, w, x, y]) != 0 \
                    and not wedge([face_minus(x), face_plus(x)]).is_zero():
                break
        report = maps.prop43_witness(v, w, x, y)
        if not report.ok:
            failures += 1
            print(f"FAIL basis={v},{w},{x},{y} checks={report.checks}",
                  file=sys.stderr)
    print(f"{args.trials} instances, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_VERIFICATION


# --- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diophlab",
        description="exact minimal-point sequences and determinant identities")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="named constants and identity checks")
    p.add_argument("--json", action="store_true")
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--verify", type=Fraction, default=None, metavar="EPS")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify-maps", help="randomized exact identity fuzzing")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coeff-bound", type=int, default=1000)
    p.add_argument("--jsonl", default=None, help="write a per-trial JSONL trail")
    p.set_defaults(func=cmd_verify_maps)

    p = sub.add_parser("minpoints", help="scan minimal points")
    p.add_argument("--xi", required=True, help="preset name or JSON spec")
    p.add_argument("--n", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--max-x0", type=_int_ish, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--precision-bits", type=int,
                   default=int(os.environ.get("DIOPHLAB_PRECISION_BITS", 128)))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_minpoints)

    p = sub.add_parser("analyze", help="chain/exponent analysis of a record file")
    p.add_argument("--in", dest="records", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--hyp-lambda", default=None, help="rational lambda for the scan")
    p.add_argument("--hyp-c", default=None, help="rational c for the scan")
    p.add_argument("--hyp-grid", default=None, help="comma-separated X values")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("oracle-check", help="brute-force re-derivation")
    p.add_argument("--in", dest="records", required=True)
    p.add_argument("--bound", type=_int_ish, required=True)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("prop43-test", help="synthetic vanishing-determinant suite")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coeff-bound", type=int, default=20)
    p.set_defaults(func=cmd_prop43)
    return parser


def _int_ish(s: str) -> int:
    """Accept 100000, 1e5, and 10^5 spellings."""
    s = s.replace("_", "")
    if "^" in s:
        base, exp = s.split("^")
        return int(base) ** int(exp)
    v = float(s)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {s}")
    return int(v)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (MismatchFound, ResidualTooLarge) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (DiophlabError, ValueError, PrecisionError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
