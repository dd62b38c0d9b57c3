"""Command-line front end: rule, trace, sweep, breakdown, check.

Emits JSON/CSV files for downstream plotting.  Exit codes: 0 success,
1 usage error, 2 expected mathematical nonexistence, 3 numerical failure
(tolerance unreachable / convergence loss).  CSV floats are printed with
the certified digit count plus one guard digit rather than full working
precision, so output files diff cleanly across platforms.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np
from mpmath import mp

from .analysis import asymptotic_order, breakdown_scan
from .checks import SUITES, run_suites
from .oracle import ToleranceUnreachableError
from .orthopoly import NonExistentError
from .precision import (
    MAX_PRECISION_BITS,
    MIN_PRECISION_BITS,
    decimal_digits,
    default_precision_bits,
    workprec,
)
from .roots import RootConvergenceError, continue_roots
from .rules import (
    WeightSolveError,
    gauss_laguerre,
    gauss_legendre,
    gauss_oscillatory,
    parse_integrand,
    superinterpolation_rule,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONEXISTENT = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class UsageError(Exception):
    pass


def _out_stream(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _print_digits(precision_bits):
    return min(decimal_digits(precision_bits) // 2 + 1, 25)


def cmd_rule(args):
    bits = args.precision
    family = args.family
    if family in ("gauss-osc", "gauss-oscillatory"):
        if args.omega is None:
            raise UsageError("--omega is required for the oscillatory family")
        rule = gauss_oscillatory(args.points, args.omega, bits)
    elif family == "gauss-legendre":
        rule = gauss_legendre(args.points, bits)
    elif family == "gauss-laguerre":
        rule = gauss_laguerre(args.points, bits)
    elif family in ("superinterp", "superinterpolation"):
        if args.points % 2 != 0 or args.omega is None:
            raise UsageError("superinterpolation needs --omega and an even --points")
        rule = superinterpolation_rule(
            args.points // 2, args.omega, bits, filon_weights=args.filon_weights
        )
    else:
        raise UsageError(f"unknown rule family {family!r}")

    stream, close = _out_stream(args.out)
    try:
        if args.format == "json":
            json.dump(rule.to_json_dict(), stream, indent=2, sort_keys=True)
            stream.write("\n")
        else:
            digits = _print_digits(bits)
            wcsv = csv.writer(stream)
            wcsv.writerow(["node_re", "node_im", "weight_re", "weight_im"])
            with workprec(bits):
                for z, w in zip(rule.nodes, rule.weights):
                    wcsv.writerow(
                        [mp.nstr(z.real, digits), mp.nstr(z.imag, digits),
                         mp.nstr(w.real, digits), mp.nstr(w.imag, digits)]
                    )
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_trace(args):
    bits = args.precision
    if args.omega_min > 0.1:
        raise UsageError("trace grids must start at omega <= 0.1 (Legendre seeding)")
    grid = np.linspace(args.omega_min, args.omega_max, args.steps)
    traj = continue_roots(args.n, grid, bits)
    digits = _print_digits(bits)

    stream, close = _out_stream(args.out)
    try:
        wcsv = csv.writer(stream)
        wcsv.writerow(["omega", "root_index", "re", "im", "speed"])
        with workprec(bits):
            for row in traj.csv_rows(digits):
                wcsv.writerow(row)
    finally:
        if close:
            stream.close()

    if args.out and args.out != "-":
        sidecar = args.out.rsplit(".", 1)[0] + ".cusps.csv"
        speeds = traj.speeds()
        with open(sidecar, "w", newline="") as fh:
            wcsv = csv.writer(fh)
            wcsv.writerow(["omega", "grid_index", "min_speed"])
            for i in traj.cusp_candidates:
                finite = [s[i] for s in speeds if not math.isnan(s[i])]
                smin = min(finite) if finite else float("nan")
                wcsv.writerow([repr(float(traj.omegas[i])), i, repr(smin)])
    return EXIT_OK


def _sweep_grid(args):
    lo, hi = args.omega_min, args.omega_max
    if not (0 < lo < hi):
        raise UsageError("sweep range must satisfy 0 < omega-min < omega-max")
    decades = math.log10(hi / lo)
    count = max(4, int(round(decades * args.per_decade)) + 1)
    return np.logspace(math.log10(lo), math.log10(hi), count)


def cmd_sweep(args):
    bits = args.precision
    f = parse_integrand(args.integrand)
    grid = _sweep_grid(args)
    fit, approx, refs = asymptotic_order(
        args.family, args.points, f, grid, tol=args.tol, precision_bits=bits,
        jobs=args.jobs,
    )
    stream, close = _out_stream(args.out)
    try:
        wcsv = csv.writer(stream)
        wcsv.writerow(["omega", "abs_error", "approx_re", "approx_im", "ref_re", "ref_im"])
        with workprec(bits):
            for row in fit.csv_rows(approx, refs):
                wcsv.writerow(row)
        stream.write(
            f"# slope = {fit.slope:.6f} +- {fit.slope_ci:.6f} over {fit.used_points} points\n"
        )
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_breakdown(args):
    bits = args.precision
    if args.n % 2 != 0:
        raise UsageError("breakdown scans require even --n")
    records, samples = breakdown_scan(
        args.n, (args.omega_min, args.omega_max), args.step, bits, jobs=args.jobs
    )
    stream, close = _out_stream(args.out)
    try:
        wcsv = csv.writer(stream)
        wcsv.writerow(["n", "omega_star", "residual", "bracket_lo", "bracket_hi"])
        with workprec(bits):
            for rec in records:
                wcsv.writerow(rec.csv_row())
    finally:
        if close:
            stream.close()
    if args.out and args.out != "-":
        sidecar = args.out.rsplit(".", 1)[0] + ".samples.csv"
        with open(sidecar, "w", newline="") as fh:
            wcsv = csv.writer(fh)
            wcsv.writerow(["omega", "norm_re", "norm_im", "abs_norm"])
            with workprec(bits):
                for w, v in samples:
                    wcsv.writerow(
                        [repr(w), mp.nstr(v.real, 17), mp.nstr(v.imag, 17), mp.nstr(abs(v), 17)]
                    )
    return EXIT_OK


def cmd_check(args):
    bits = args.precision
    names = args.suite if args.suite else None
    results = run_suites(names, bits, out_dir=args.out)
    width = max(len(f"{r.suite}/{r.name}") for r in results)
    failed = 0
    for r in results:
        status = "pass" if r.passed else "FAIL"
        line = f"{r.suite + '/' + r.name:<{width}}  {status}"
        if r.detail:
            line += f"  ({r.detail})"
        print(line)
        if not r.passed:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_NUMERICAL


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--precision", type=int, default=argparse.SUPPRESS,
        help=f"working precision in bits [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}]; "
        "default 256, or OSCGAUSS_PRECISION",
    )
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="worker processes for sweeps/scans (default 1)")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)

    parser = _Parser(prog="oscgauss", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_command("rule", help="construct one quadrature rule")
    p.add_argument("--family", required=True,
                   choices=("gauss-osc", "gauss-oscillatory", "gauss-legendre",
                            "gauss-laguerre", "superinterp", "superinterpolation"))
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--filon-weights", action="store_true",
                   help="superinterpolation: re-derive interpolatory weights")
    p.set_defaults(func=cmd_rule)

    p = add_command("trace", help="trace root trajectories over omega")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--omega-min", type=float, default=0.01)
    p.add_argument("--omega-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_trace)

    p = add_command("sweep", help="error sweep against the oracle")
    p.add_argument("--family", required=True,
                   choices=("gauss-osc", "gauss-oscillatory", "superinterp", "superinterpolation"))
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--integrand", default="sin")
    p.add_argument("--omega-min", type=float, required=True)
    p.add_argument("--omega-max", type=float, required=True)
    p.add_argument("--per-decade", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-24, help="oracle tolerance")
    p.set_defaults(func=cmd_sweep)

    p = add_command("breakdown", help="scan for vanishing polynomial norms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--omega-min", type=float, required=True)
    p.add_argument("--omega-max", type=float, required=True)
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=cmd_breakdown)

    p = add_command("check", help="run the invariant check suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES) + ["all"],
                   help="suite name (repeatable); default all")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    bits = getattr(args, "precision", None)
    if bits is None:
        try:
            bits = default_precision_bits()
        except ValueError as exc:
            parser.error(str(exc))
    if not (MIN_PRECISION_BITS <= bits <= MAX_PRECISION_BITS):
        parser.error(f"precision {bits} outside [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}]")
    args.precision = bits
    args.jobs = max(1, getattr(args, "jobs", 1))
    args.out = getattr(args, "out", None)
    if not hasattr(args, "format"):
        args.format = "csv" if args.command in ("trace", "sweep", "breakdown") else "json"

    try:
        return args.func(args)
    except NonExistentError as exc:
        payload = {
            "error": "non-existent",
            "degree": exc.degree,
            "omega": float(mp.mpf(exc.omega)) if exc.omega is not None else None,
            "min_pivot": exc.min_pivot,
            "kind": exc.kind,
            "message": str(exc),
        }
        stream, close = _out_stream(args.out)
        json.dump(payload, stream, indent=2, sort_keys=True)
        stream.write("\n")
        if close:
            stream.close()
        return EXIT_NONEXISTENT
    except (ToleranceUnreachableError, RootConvergenceError, WeightSolveError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
