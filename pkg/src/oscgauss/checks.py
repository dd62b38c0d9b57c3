"""Invariant check suites behind the `check` CLI command.

Each suite bundles the numerical invariants of one part of the pipeline
into named pass/fail results, sized to run in seconds to a couple of
minutes.  Suites optionally write the CSV data files the plotting
component consumes.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from .analysis import (
    asymptotic_order,
    breakdown_scan,
    check_coeff_recurrences,
    check_derivative_identity,
    limit_defect,
    superinterp_distance,
)
from .moments import moment_table
from .oracle import reference_integral
from .orthopoly import (
    NonExistentError,
    orthogonal_polynomial,
    pairing,
    symmetry_defect,
)
from .precision import decimal_digits, default_precision_bits, workprec
from .roots import polynomial_roots
from .rules import Integrand, apply_rule, gauss_oscillatory, superinterpolation_rule


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _result(suite, name, passed, detail=""):
    return CheckResult(suite=suite, name=name, passed=bool(passed), detail=detail)


def suite_moments(precision_bits, out_dir=None):
    results = []
    with workprec(precision_bits + 64):
        worst_parity = mp.mpf(0)
        worst_bound = mp.mpf(0)
        for w in (0.0, 0.5, 2.0, 10.0, 50.0, 200.0):
            t = moment_table(w, 12, precision_bits)
            thresh = mp.mpf(10) ** (-t.certified_digits)
            for m in range(13):
                dev = abs(t[m].imag) if m % 2 == 0 else abs(t[m].real)
                worst_parity = max(worst_parity, dev - thresh)
                worst_bound = max(worst_bound, abs(t[m]) - 2)
        results.append(
            _result("moments", "parity-re-im-pattern", worst_parity <= 0,
                    f"worst excess {mp.nstr(worst_parity, 3)}")
        )
        results.append(
            _result("moments", "magnitude-bound-2", worst_bound <= 0,
                    f"worst excess {mp.nstr(worst_bound, 3)}")
        )

        worst_oracle = mp.mpf(0)
        for w in (0.5, 2.0, 10.0, 50.0):
            t = moment_table(w, 10, precision_bits)
            for m in range(11):
                rv = reference_integral(Integrand("monomial", m), w, 1e-30, precision_bits)
                worst_oracle = max(worst_oracle, abs(t[m] - rv.value) - 20 * rv.est_error - mp.mpf(10) ** (-t.certified_digits))
        results.append(
            _result("moments", "oracle-agreement", worst_oracle <= 0,
                    f"worst excess {mp.nstr(worst_oracle, 3)}")
        )

        sw = 0.25
        a = moment_table(sw, 8, precision_bits, method="series")
        b = moment_table(sw, 8, precision_bits, method="recurrence")
        cut = mp.mpf(10) ** (-min(a.certified_digits, b.certified_digits))
        worst = max(abs(a[m] - b[m]) for m in range(9))
        results.append(
            _result("moments", "series-recurrence-switch", worst <= cut,
                    f"max diff {mp.nstr(worst, 3)}")
        )
    return results


def suite_symmetry(precision_bits, out_dir=None):
    results = []
    digits = decimal_digits(precision_bits)
    tol = mp.mpf(10) ** (-min(20, digits // 2))
    with workprec(precision_bits + 32):
        worst_coeff = mp.mpf(0)
        worst_nodes = mp.mpf(0)
        for w in (0.5, 3.0, 10.0, 40.0, 100.0):
            for n in (1, 2, 3, 4, 8, 16):
                try:
                    p = orthogonal_polynomial(n, w, precision_bits)
                except NonExistentError:
                    continue
                worst_coeff = max(worst_coeff, symmetry_defect(p))
                if n % 2 == 0:
                    nodes = polynomial_roots(p, precision_bits=precision_bits)
                    dev = max(
                        min(abs(z + y.conjugate()) for y in nodes) for z in nodes
                    )
                    worst_nodes = max(worst_nodes, dev)
        results.append(
            _result("symmetry", "coefficient-pattern", worst_coeff <= tol,
                    f"worst defect {mp.nstr(worst_coeff, 3)}")
        )
        results.append(
            _result("symmetry", "node-set-reflection", worst_nodes <= tol,
                    f"worst defect {mp.nstr(worst_nodes, 3)}")
        )
    return results


def suite_orthogonality(precision_bits, out_dir=None):
    results = []
    with workprec(2 * precision_bits):
        worst = mp.mpf(0)
        for w in (0.5, 3.0, 10.0, 40.0, 100.0):
            for n in (1, 2, 4, 8, 16):
                p = orthogonal_polynomial(n, w, precision_bits)
                table = moment_table(w, 2 * n - 1, 2 * precision_bits)
                cut = mp.mpf(10) ** (-p.certified_digits)
                for j in range(n):
                    mono = [mp.mpc(0)] * j + [mp.mpc(1)]
                    worst = max(worst, abs(pairing(p, mono, table)) - cut)
        results.append(
            _result("orthogonality", "residuals-below-certified", worst <= 0,
                    f"worst excess {mp.nstr(worst, 3)}")
        )
    return results


def suite_identities(precision_bits, out_dir=None):
    results = []
    ok_deriv, ok_ratio = True, True
    detail = []
    h = 1e-4
    for w in (2.0, 7.0, 15.0):
        for n in range(2, 7):
            ra, rb = check_derivative_identity(n, w, h, precision_bits)
            ratio = float(ra / rb) if rb > 0 else float("nan")
            # the ratio check certifies the order; this guard only has to
            # catch O(1) identity violations, so the constant is generous
            if not (ra <= 1e4 * mp.mpf(h) ** 2):
                ok_deriv = False
                detail.append(f"n={n} w={w} residual {mp.nstr(ra, 3)}")
            if not 3.5 <= ratio <= 4.5:
                ok_ratio = False
                detail.append(f"n={n} w={w} ratio {ratio:.2f}")
    results.append(
        _result("identities", "derivative-identity-h2", ok_deriv, "; ".join(detail[:3]))
    )
    results.append(
        _result("identities", "derivative-richardson-ratio", ok_ratio, "; ".join(detail[:3]))
    )

    ok1 = ok2 = True
    detail = []
    for w in (2.0, 7.0, 15.0):
        for k in (0, 1, 2):
            (r1a, r1b), (r2a, r2b) = check_coeff_recurrences(k, w, 1e-4, precision_bits)
            q1 = float(r1a / r1b) if r1b > 0 else float("nan")
            q2 = float(r2a / r2b) if r2b > 0 else float("nan")
            if not 3.5 <= q1 <= 4.5:
                ok1 = False
                detail.append(f"k={k} w={w} q1={q1:.2f}")
            if not 3.5 <= q2 <= 4.5:
                ok2 = False
                detail.append(f"k={k} w={w} q2={q2:.2f}")
    results.append(
        _result("identities", "deformation-beta-ratio", ok1, "; ".join(detail[:3]))
    )
    results.append(
        _result("identities", "deformation-alpha-ratio", ok2, "; ".join(detail[:3]))
    )
    return results


def suite_exactness(precision_bits, out_dir=None):
    results = []
    tol = mp.mpf(10) ** (-20)
    worst = mp.mpf(0)
    with workprec(precision_bits + 32):
        for w in (0.5, 3.0, 10.0, 50.0):
            for n in (2, 4, 6, 8):
                rule = gauss_oscillatory(n, w, precision_bits)
                table = moment_table(w, 2 * n - 1, precision_bits)
                for k in range(2 * n):
                    approx = apply_rule(rule, Integrand("monomial", k))
                    worst = max(worst, abs(approx - table[k]))
                worst = max(worst, abs(rule.weight_sum() - table[0]))
    results.append(
        _result("exactness", "gaussian-2n-1-exactness", worst <= tol,
                f"worst defect {mp.nstr(worst, 3)}")
    )
    return results


def suite_breakdown(precision_bits, out_dir=None):
    results = []
    records, samples = breakdown_scan(2, (0.1, 7.0), 0.01, precision_bits)
    ok_first = len(records) == 1
    detail = f"{len(records)} records"
    if ok_first:
        with workprec(precision_bits):
            star = mp.findroot(
                lambda w: 2 * w**3 * mp.cos(w) + w**2 * (w**2 - 3) * mp.sin(w) + mp.sin(w) ** 3,
                mp.mpf("5.93"),
            )
            ok_first = abs(records[0].omega_star - star) < mp.mpf(1e-4)
            detail = f"omega* = {mp.nstr(records[0].omega_star, 12)}"
    results.append(_result("breakdown", "first-zero-location", ok_first, detail))

    ok_conj3 = bool(records)
    detail = []
    for rec in records:
        try:
            orthogonal_polynomial(3, rec.omega_star, precision_bits)
            ok_conj3 = False
            detail.append("degree-3 solve unexpectedly succeeded")
        except NonExistentError:
            pass
        p2 = orthogonal_polynomial(2, rec.omega_star, precision_bits)
        table = moment_table(rec.omega_star, 4, precision_bits)
        resid = max(
            abs(pairing(p2, [mp.mpc(0)] * j + [mp.mpc(1)], table)) for j in range(3)
        )
        if resid > mp.mpf(1e-10):
            ok_conj3 = False
            detail.append(f"degree-3 orthogonality residual {mp.nstr(resid, 3)}")
    results.append(
        _result("breakdown", "odd-degree-nonexistence", ok_conj3, "; ".join(detail[:2]))
    )

    if out_dir is not None:
        path = os.path.join(out_dir, "breakdown_n2_samples.csv")
        with open(path, "w", newline="") as fh:
            wcsv = csv.writer(fh)
            wcsv.writerow(["omega", "norm_re", "norm_im", "abs_norm"])
            for w, v in samples:
                wcsv.writerow([repr(w), mp.nstr(v.real, 17), mp.nstr(v.imag, 17), mp.nstr(abs(v), 17)])
    return results


def suite_superinterp(precision_bits, out_dir=None):
    results = []
    # equivalence of the two steepest-descent evaluation paths
    from .rules import steepest_descent_eval

    worst = mp.mpf(0)
    with workprec(precision_bits):
        for (key, par, w) in (("one", None, 7.0), ("monomial", 3, 12.0), ("sin", None, 40.0), ("cos", None, 25.0), ("exp", None, 18.0)):
            f = Integrand(key, par)
            a = steepest_descent_eval(f, w, 4, precision_bits)
            b = apply_rule(superinterpolation_rule(4, w, precision_bits), f)
            worst = max(worst, abs(a - b))
    results.append(
        _result("superinterp", "steepest-descent-equivalence",
                worst <= mp.mpf(10) ** (-(decimal_digits(precision_bits) - 10)),
                f"worst gap {mp.nstr(worst, 3)}")
    )

    # Gaussian nodes approach superinterpolation nodes at O(1/omega^2)
    omegas = (50.0, 100.0, 200.0)
    dists = {w: superinterp_distance(16, w, precision_bits) for w in omegas}
    scaled = {w: [float(d) * w * w for d in dists[w]] for w in omegas}
    ratios = [
        scaled[200.0][j] / scaled[100.0][j] for j in range(16)
    ] + [scaled[100.0][j] / scaled[50.0][j] for j in range(16)]
    ok = all(0.5 <= r <= 2.0 for r in ratios)
    results.append(
        _result("superinterp", "distance-times-omega2-stable", ok,
                f"ratio range [{min(ratios):.3f}, {max(ratios):.3f}]")
    )

    # pointwise Laguerre-product limit
    samples = [mp.mpf(x) for x in np.linspace(-1, 1, 21)]
    ok_lim = True
    detail = []
    for nt in (2, 4):
        d_lo = limit_defect(nt, 100.0, samples, precision_bits)
        d_hi = limit_defect(nt, 1000.0, samples, precision_bits)
        if not d_hi * 5 <= d_lo:
            ok_lim = False
            detail.append(f"n={nt}: {mp.nstr(d_lo, 3)} -> {mp.nstr(d_hi, 3)}")
    results.append(
        _result("superinterp", "laguerre-product-limit-decay", ok_lim, "; ".join(detail))
    )

    if out_dir is not None:
        path = os.path.join(out_dir, "superinterp_distances_n16.csv")
        with open(path, "w", newline="") as fh:
            wcsv = csv.writer(fh)
            wcsv.writerow(["omega", "node_index", "distance"])
            for w in omegas:
                for j, d in enumerate(dists[w]):
                    wcsv.writerow([repr(w), j, mp.nstr(d, 17)])
    return results


def suite_order(precision_bits, out_dir=None):
    results = []
    grid = np.logspace(1, 4, 25)
    f = Integrand("sin")
    cases = (
        ("gauss-osc", 2, -3.0, 0.2),
        ("gauss-osc", 4, -5.0, 0.3),
        ("superinterp", 2, -3.0, 0.2),
    )
    for family, pts, expect, width in cases:
        fit, approx, refs = asymptotic_order(family, pts, f, grid, tol=1e-24, precision_bits=precision_bits)
        ok = expect - width <= fit.slope <= expect + width
        results.append(
            _result("order", f"{family}-{pts}pt-slope", ok,
                    f"slope {fit.slope:.3f} (ci {fit.slope_ci:.3f}, {fit.used_points} pts)")
        )
        if out_dir is not None:
            path = os.path.join(out_dir, f"sweep_{family}_{pts}pt_sin.csv")
            _write_sweep_csv(path, fit, approx, refs)
    return results


def _write_sweep_csv(path, fit, approx, refs):
    with open(path, "w", newline="") as fh:
        wcsv = csv.writer(fh)
        wcsv.writerow(["omega", "abs_error", "approx_re", "approx_im", "ref_re", "ref_im"])
        for row in fit.csv_rows(approx, refs):
            wcsv.writerow(row)
        fh.write(f"# slope = {fit.slope:.6f} +- {fit.slope_ci:.6f} over {fit.used_points} points\n")


SUITES = {
    "moments": suite_moments,
    "symmetry": suite_symmetry,
    "orthogonality": suite_orthogonality,
    "identities": suite_identities,
    "exactness": suite_exactness,
    "breakdown": suite_breakdown,
    "superinterp": suite_superinterp,
    "order": suite_order,
}


def run_suites(names=None, precision_bits=None, out_dir=None):
    """Run the named suites (all by default); returns a list of CheckResult."""
    if precision_bits is None:
        precision_bits = default_precision_bits()
    if names is None or names == ["all"]:
        names = list(SUITES)
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)
        results.extend(SUITES[name](precision_bits, out_dir=out_dir))
    return results
