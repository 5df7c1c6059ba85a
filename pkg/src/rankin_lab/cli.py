"""Command-line entry point: ``python -m rankin_lab`` or ``rankin-lab``.

Exit status is 0 on success, 1 on a computational or data error, 2 on a
usage error. Floats are printed with repr, i.e. shortest round-trip.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import bounds, error_terms, persistence, short_interval, voronoi
from .coefficients import build_table, oracle_tau_eisenstein
from .errors import (CorruptCacheError, CrossCheckError, FormatError, RangeError,
                     ResourceExhaustedError, UnsupportedRangeError)

DEFAULT_CACHE = "rankin_table.rst"

SWEEP_COLUMNS = [
    "X", "u", "U", "continuous", "discrete", "shifted_discrete",
    "trivial_env", "theorem1_env", "lindelofZ_env",
    "trivial_ratio", "theorem1_ratio", "lindelofZ_ratio",
]


class CliError(Exception):
    """Reported on stderr with exit status 1."""


class UsageError(Exception):
    """Reported with the usage line and exit status 2."""


def _number(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _emit(out, record: dict) -> None:
    out.write(json.dumps({k: (float(v) if isinstance(v, np.floating) else v)
                          for k, v in record.items()}) + "\n")


def _load(args):
    try:
        return persistence.load_table(args.cache)
    except FileNotFoundError:
        raise CliError(f"no cache at {args.cache}; run 'sieve --nmax N' first") from None


def _mean_constant(args, table):
    if args.c is not None:
        return args.c, None
    try:
        est = error_terms.estimate_C(table)
    except RangeError as exc:
        raise CliError(f"{exc}; pass --c explicitly") from None
    return est.value, est


def cmd_sieve(args, out):
    table = build_table(args.nmax)
    if args.oracle_check:
        m = min(args.oracle_check, args.nmax)
        ref = oracle_tau_eisenstein(m)
        bad = next((n for n in range(1, m + 1) if int(ref[n]) != int(table.tau[n])), None)
        if bad is not None:
            raise CliError(f"oracle mismatch at n={bad}")
    persistence.save_table(args.cache, table)
    _emit(out, {"n_max": table.n_max, "kappa": table.kappa, "cache": str(args.cache),
                "oracle_checked": args.oracle_check or 0,
                "tau_2": int(table.tau[2]) if table.n_max >= 2 else None})


def cmd_delta(args, out):
    table = _load(args)
    C, est = _mean_constant(args, table)
    d = error_terms.delta(args.x, C, table)
    rec = {"x": args.x, "C": C, "delta": d,
           "normalized": d / args.x ** error_terms.RS_EXPONENT if args.x > 0 else 0.0}
    if est is not None:
        rec["C_uncertainty"] = est.uncertainty
        rec["delta_shift_from_uncertainty"] = error_terms.delta_sensitivity(args.x, est.uncertainty)
    _emit(out, rec)


def cmd_estimate_c(args, out):
    table = _load(args)
    methods = {"lsq": ["least-squares"], "diffquot": ["difference-quotient"],
               "both": ["least-squares", "difference-quotient"]}[args.method]
    ests = [error_terms.estimate_C(table, m) for m in methods]
    for e in ests:
        _emit(out, {"method": e.method, "value": e.value, "uncertainty": e.uncertainty,
                    "sample": e.sample})
    if len(ests) == 2:
        gap = abs(ests[0].value - ests[1].value)
        _emit(out, {"agreement_gap": gap,
                    "within_uncertainty": gap <= max(e.uncertainty for e in ests)})


def cmd_voronoi(args, out):
    table = _load(args)
    C, _ = _mean_constant(args, table)
    if args.scan:
        K_grid = []
        k = 16
        while k <= args.kmax:
            K_grid.append(k)
            k *= 4
        if len(K_grid) < 2:
            raise CliError("--scan needs --kmax >= 64")
        scan = voronoi.truncation_scan([args.x], K_grid, table, C)
        _emit(out, {"x": args.x, "K": K_grid,
                    "mean_abs_error": [float(v) for v in scan.mean_abs_error[0]],
                    "slope": float(scan.slopes[0]), "intercept": float(scan.intercepts[0])})
    else:
        ev = voronoi.evaluate(args.x, args.kmax, C, table)
        _emit(out, {"x": ev.x, "K": ev.K, "value": ev.value,
                    "exact_delta": ev.exact_delta, "abs_error": ev.abs_error})


def cmd_meansquare(args, out):
    if not args.real_u and args.u != int(args.u):
        raise UsageError("non-integer --u requires --real-u")
    table = _load(args)
    C, _ = _mean_constant(args, table)
    cell = short_interval.interval_mean_square(args.x, args.u, C, table)
    rec = {"X": cell.X, "U": cell.U, "C": C, "continuous": cell.continuous,
           "discrete": cell.discrete, "shifted_discrete": cell.shifted_discrete,
           "breakpoints": cell.breakpoints, "max_window": cell.max_window}
    for name, v in cell.envelopes.items():
        rec[f"{name}_env"] = v
    _emit(out, rec)


def _sweep_rows(result):
    for c in result.cells:
        envs = [c.envelopes.get(n, math.nan) for n in ("trivial", "theorem1", "lindelofZ")]
        yield [c.X, c.u, c.U, c.continuous, c.discrete, c.shifted_discrete, *envs,
               *[c.continuous / e if e and e == e else math.nan for e in envs]]


def cmd_sweep(args, out):
    table = _load(args)
    C, _ = _mean_constant(args, table)
    result = short_interval.sweep(args.x_list, args.u_exp_list, C, table, mu=args.mu,
                                  with_range=args.with_range, threads=args.threads)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for row in _sweep_rows(result):
            w.writerow([_fmt(v) for v in row])
        out.write(buf.getvalue())
    else:
        for row in _sweep_rows(result):
            _emit(out, dict(zip(SWEEP_COLUMNS, row)))


def cmd_fit(args, out):
    xs, ys = [], []
    with open(args.input, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                xs.append(float(row[args.xcol]))
                ys.append(float(row[args.ycol]))
            except KeyError as exc:
                raise CliError(f"column {exc} not in {args.input}") from None
    fit = bounds.fit_exponent(list(zip(xs, ys)))
    _emit(out, {"slope": fit.slope, "intercept": fit.intercept,
                "residual_rms": fit.residual_rms, "count": fit.count, "stderr": fit.stderr})


def cmd_divisor_baseline(args, out):
    lead, detail = bounds.divisor_leading_coefficient(args.x, args.u_list)
    _emit(out, {"X": detail.X, "U": detail.U, "coefficients": list(detail.coefficients),
                "leading": lead, "target": detail.target,
                "relative_error": detail.relative_error})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", default=DEFAULT_CACHE, help="tau cache file")
    withc = argparse.ArgumentParser(add_help=False)
    withc.add_argument("--c", type=float, default=None, help="override the mean constant C")

    p = argparse.ArgumentParser(prog="rankin-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="build and cache the tau table")
    s.add_argument("--nmax", type=int, required=True)
    s.add_argument("--oracle-check", type=int, default=0, metavar="M")
    s.set_defaults(func=cmd_sieve)

    s = sub.add_parser("delta", parents=[common, withc])
    s.add_argument("--x", type=float, required=True)
    s.set_defaults(func=cmd_delta)

    s = sub.add_parser("estimate-c", parents=[common])
    s.add_argument("--method", choices=["lsq", "diffquot", "both"], default="both")
    s.set_defaults(func=cmd_estimate_c)

    s = sub.add_parser("voronoi", parents=[common, withc])
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--kmax", type=int, required=True)
    s.add_argument("--scan", action="store_true")
    s.set_defaults(func=cmd_voronoi)

    s = sub.add_parser("meansquare", parents=[common, withc])
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--u", type=_number, required=True)
    s.add_argument("--real-u", action="store_true")
    s.set_defaults(func=cmd_meansquare)

    s = sub.add_parser("sweep", parents=[common, withc])
    s.add_argument("--x-list", type=int, nargs="+", required=True)
    s.add_argument("--u-exp-list", type=_number, nargs="+", required=True)
    s.add_argument("--mu", type=_number, default=0.0)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--with-range", action="store_true",
                   help="add the improvement-range endpoints to the u grid")
    s.add_argument("--threads", type=int, default=None)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("fit")
    s.add_argument("--input", required=True)
    s.add_argument("--xcol", required=True)
    s.add_argument("--ycol", required=True)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("divisor-baseline")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--u-list", type=int, nargs="+", required=True)
    s.set_defaults(func=cmd_divisor_baseline)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (CliError, RangeError, CorruptCacheError, CrossCheckError, FormatError,
            ResourceExhaustedError, UnsupportedRangeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
