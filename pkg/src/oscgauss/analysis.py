"""Experiment layer: breakdown scans, order fits, distances, identity checks.

Everything here sits behind the numerical observations about the rules:
where the polynomial norms vanish, how fast errors decay in omega, how
close the Gaussian nodes come to the superinterpolation points, and
whether the derivative identities of the coefficients hold.  Identity
checks use finite differences only, so they stay independent of the
construction path they are checking.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from mpmath import mp

from .moments import moment_table
from .oracle import ReferenceValue, laguerre_eval, reference_integral
from .orthopoly import (
    NonExistentError,
    orthogonal_polynomial,
    pairing,
    poly_eval,
    recurrence_coeffs,
)
from .precision import as_mpf, decimal_digits, default_precision_bits, workprec
from .roots import polynomial_roots
from .rules import Integrand, apply_rule, gauss_oscillatory, superinterpolation_rule

BRACKET_TOL = 1e-10
NOISE_FLOOR_FACTOR = 10.0


@dataclass(frozen=True)
class BreakdownRecord:
    """A frequency where (p_n, p_n) vanishes."""

    n: int
    omega_star: object
    residual: object
    bracket: tuple

    def csv_row(self):
        return (
            self.n,
            mp.nstr(self.omega_star, 17),
            mp.nstr(self.residual, 8),
            mp.nstr(self.bracket[0], 17),
            mp.nstr(self.bracket[1], 17),
        )


@dataclass(frozen=True)
class OrderFit:
    """Least-squares slope of log10 error against log10 omega."""

    method: str
    integrand: str
    omega_grid: tuple
    errors: tuple
    slope: float
    slope_ci: float
    used_points: int

    def csv_rows(self, approx, refs):
        for w, err, ap, rv in zip(self.omega_grid, self.errors, approx, refs):
            yield (
                repr(float(w)),
                repr(float(err)),
                mp.nstr(ap.real, 17),
                mp.nstr(ap.imag, 17),
                mp.nstr(rv.value.real, 17),
                mp.nstr(rv.value.imag, 17),
            )


def _realness_guard(value, digits):
    """The scanned norm must be real up to certified digits for even n."""
    tol = mp.mpf(10) ** (-max(5, digits // 3))
    scale = max(abs(value), mp.mpf(1) / 10**6)
    return abs(value.imag) <= tol * scale


def _norm_point(params):
    n, w, precision_bits = params
    table = moment_table(w, 2 * n, precision_bits)
    p = orthogonal_polynomial(n, w, precision_bits)
    return w, pairing(p, p, table)


def breakdown_scan(n: int, omega_range, step: float, precision_bits: int = None, jobs: int = 1):
    """Bracket and refine every zero of (p_n, p_n)(omega) in the range.

    Sign changes of the real part are bracketed on the sample grid and
    polished by bisection plus a secant finish, leaving omega_star far
    tighter than the reported bracket (width <= 1e-10) so that downstream
    nonexistence checks at omega_star see a genuinely singular system.
    Grid sampling fans out over `jobs` worker processes; refinement is
    sequential.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    if n < 2 or n % 2 != 0:
        raise ValueError("breakdown scan requires even n >= 2")
    if step > 0.05:
        raise ValueError("scan step must be <= 0.05")
    lo, hi = float(omega_range[0]), float(omega_range[1])
    if not (0 < lo < hi):
        raise ValueError("omega range must satisfy 0 < lo < hi")

    digits = decimal_digits(precision_bits)
    cache = {}

    def norm_at(w: float):
        if w not in cache:
            cache[w] = _norm_point((n, w, precision_bits))[1]
        val = cache[w]
        if not _realness_guard(val, digits):
            raise ArithmeticError(
                f"(p_{n}, p_{n}) has non-negligible imaginary part at omega={w}"
            )
        return val

    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = [min(lo + i * step, hi) for i in range(count)]
    if grid[-1] < hi:
        grid.append(hi)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for w, val in pool.map(_norm_point, [(n, w, precision_bits) for w in grid]):
                cache[w] = val
    samples = [(w, norm_at(w)) for w in grid]

    records = []
    for (wa, va), (wb, vb) in zip(samples, samples[1:]):
        if va.real == 0:
            records.append(_refine(n, wa, wa, norm_at, precision_bits))
            continue
        if va.real * vb.real < 0:
            records.append(_refine(n, wa, wb, norm_at, precision_bits))
    return records, samples


def _refine(n, lo, hi, norm_at, precision_bits):
    flo = norm_at(lo).real
    a, b = lo, hi
    # float bisection narrows the reported bracket
    while b - a > BRACKET_TOL / 4:
        mid = 0.5 * (a + b)
        fm = norm_at(mid).real
        if fm == 0:
            a = b = mid
            break
        if flo * fm < 0:
            b = mid
        else:
            a, flo = mid, fm

    def norm_mp(x):
        table = moment_table(x, 2 * n, precision_bits)
        p = orthogonal_polynomial(n, x, precision_bits)
        return pairing(p, p, table)

    # safeguarded secant in full precision: omega_star ends up far tighter
    # than the bracket, so (p_n, p_n)(omega_star) is singular to working
    # precision and degree-(n+1) nonexistence is observable there
    with workprec(precision_bits + 32):
        xa, xb = mp.mpf(a), mp.mpf(b)
        fa, fb = norm_mp(xa).real, norm_mp(xb).real
        stop = mp.mpf(10) ** (-(decimal_digits(precision_bits) - 12))
        omega_star = xb if abs(fb) < abs(fa) else xa
        side = 0  # Illinois damping keeps convergence superlinear
        for _ in range(200):
            if fb == fa or xb == xa:
                break
            x2 = xb - fb * (xb - xa) / (fb - fa)
            if not (xa < x2 < xb):
                x2 = (xa + xb) / 2
            f2 = norm_mp(x2).real
            omega_star = x2
            if f2 == 0:
                break
            if fa * f2 < 0:
                xb, fb = x2, f2
                if side == -1:
                    fa /= 2
                side = -1
            else:
                xa, fa = x2, f2
                if side == 1:
                    fb /= 2
                side = 1
            if xb - xa < stop * max(1, abs(x2)):
                break
        residual = abs(norm_mp(omega_star))
    return BreakdownRecord(
        n=n,
        omega_star=omega_star,
        residual=residual,
        bracket=(mp.mpf(a), mp.mpf(b)),
    )


def _order_point(params):
    rule_family, n_points, f, w, tol, precision_bits = params
    rule = _build_rule(rule_family, n_points, w, precision_bits)
    approx = apply_rule(rule, f)
    rv = reference_integral(f, w, tol, precision_bits)
    with workprec(precision_bits):
        err = abs(approx - rv.value)
    return err, approx, rv


def asymptotic_order(
    rule_family: str,
    n_points: int,
    f: Integrand,
    omega_grid,
    tol: float = 1e-24,
    precision_bits: int = None,
    jobs: int = 1,
):
    """Fit the error-decay exponent of a rule family over a log grid.

    Points whose error sits within NOISE_FLOOR_FACTOR of the oracle's
    est_error are excluded from the fit.  Grid points are independent and
    fan out over `jobs` worker processes; results keep grid order.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    grid = [float(w) for w in omega_grid]
    if len(grid) < 4:
        raise ValueError("need at least 4 grid points")
    if grid[-1] / grid[0] < 99.0:
        raise ValueError("grid must span at least two decades")

    params = [(rule_family, n_points, f, w, tol, precision_bits) for w in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            triples = list(pool.map(_order_point, params))
    else:
        triples = [_order_point(p) for p in params]
    errors = [t[0] for t in triples]
    approxima = [t[1] for t in triples]
    refs = [t[2] for t in triples]

    xs, ys = [], []
    for w, err, rv in zip(grid, errors, refs):
        if err <= NOISE_FLOOR_FACTOR * rv.est_error:
            continue
        xs.append(math.log10(w))
        ys.append(math.log10(float(err)))
    if len(xs) < 3:
        raise ArithmeticError("all sweep points sit below the oracle noise floor")
    coeffs, cov = np.polyfit(xs, ys, 1, cov=True)
    slope = float(coeffs[0])
    ci = 2.0 * float(np.sqrt(cov[0, 0]))
    fit = OrderFit(
        method=rule_family,
        integrand=f.label(),
        omega_grid=tuple(grid),
        errors=tuple(float(e) for e in errors),
        slope=slope,
        slope_ci=ci,
        used_points=len(xs),
    )
    return fit, approxima, refs


def _build_rule(rule_family: str, n_points: int, omega, precision_bits: int):
    if rule_family in ("gauss-osc", "gauss-oscillatory"):
        return gauss_oscillatory(n_points, omega, precision_bits)
    if rule_family in ("superinterp", "superinterpolation"):
        if n_points % 2 != 0:
            raise ValueError("superinterpolation rules have an even point count")
        return superinterpolation_rule(n_points // 2, omega, precision_bits)
    raise ValueError(f"unknown rule family {rule_family!r}")


def superinterp_distance(n_total: int, omega, precision_bits: int = None):
    """Distance from each Gaussian node to its matched superinterpolation node.

    Matching is an optimal assignment, and distances are returned ordered by
    the superinterpolation node they attach to (left group by ascending
    Laguerre node, then right group), which makes them comparable across
    frequencies.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    if n_total % 2 != 0 or n_total < 2:
        raise ValueError("n_total must be even and >= 2")
    rule = gauss_oscillatory(n_total, omega, precision_bits)
    si = superinterpolation_rule(n_total // 2, omega, precision_bits)
    cost = np.empty((n_total, n_total))
    for i, g in enumerate(rule.nodes):
        for j, s in enumerate(si.nodes):
            cost[i, j] = abs(complex(g) - complex(s))
    rows, cols = linear_sum_assignment(cost)
    with workprec(precision_bits):
        dist_by_si = [None] * n_total
        for i, j in zip(rows, cols):
            dist_by_si[j] = abs(rule.nodes[i] - si.nodes[j])
    return dist_by_si


def check_derivative_identity(n: int, omega, h: float, precision_bits: int = None):
    """Residual of d p_n / d omega = -i beta_n p_{n-1} by central differences.

    Returns (residual_h, residual_h_half); their ratio near 4 confirms the
    expected second-order convergence of the difference quotient.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()

    def residual(hh):
        with workprec(precision_bits):
            w = as_mpf(omega)
            p_plus = orthogonal_polynomial(n, w + hh, precision_bits)
            p_minus = orthogonal_polynomial(n, w - hh, precision_bits)
            p_mid = orthogonal_polynomial(n, w, precision_bits)
            p_low = (
                orthogonal_polynomial(n - 1, w, precision_bits).full_coeffs()
                if n > 1
                else (mp.mpc(1),)
            )
            table = moment_table(w, 2 * n, precision_bits)
            beta_n = pairing(p_mid, p_mid, table) / pairing(p_low, p_low, table)
            worst = mp.mpf(0)
            for k in range(n):
                fd = (p_plus.full_coeffs()[k] - p_minus.full_coeffs()[k]) / (2 * hh)
                model = -mp.mpc(0, 1) * beta_n * p_low[k]
                worst = max(worst, abs(fd - model))
            return worst

    with workprec(precision_bits):
        hh = as_mpf(h)
    return residual(hh), residual(hh / 2)


def check_coeff_recurrences(k: int, omega, h: float, precision_bits: int = None):
    """Residuals of the two deformation identities for alpha_k, beta_{k+1}.

    Identity 1: beta_{k+1} = beta_k - i alpha_k'.
    Identity 2: alpha_{k+1} = alpha_k - i beta_{k+1}' / beta_{k+1}.
    Returns ((r1_h, r1_h2), (r2_h, r2_h2)) for Richardson confirmation.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()

    def residuals(hh):
        with workprec(precision_bits):
            w = as_mpf(omega)
            rc = recurrence_coeffs(k + 1, w, precision_bits)
            rc_p = recurrence_coeffs(k + 1, w + hh, precision_bits)
            rc_m = recurrence_coeffs(k + 1, w - hh, precision_bits)
            if min(rc.defined_up_to, rc_p.defined_up_to, rc_m.defined_up_to) < k + 1:
                raise NonExistentError(
                    k + 1, omega, 0.0, kind="singular", detail="recurrence terminated early"
                )
            alpha_prime = (rc_p.alpha[k] - rc_m.alpha[k]) / (2 * hh)
            # the recurrence never uses beta_0; differentiating the k=0 step
            # (where p_{-1} = 0) gives beta_1 = -i alpha_0', i.e. beta_0 = 0
            beta_k = rc.beta[k - 1] if k >= 1 else mp.mpc(0)
            r1 = abs(rc.beta[k] - (beta_k - mp.mpc(0, 1) * alpha_prime))
            beta_next_prime = (rc_p.beta[k] - rc_m.beta[k]) / (2 * hh)
            r2 = abs(
                rc.alpha[k + 1]
                - (rc.alpha[k] - mp.mpc(0, 1) * beta_next_prime / rc.beta[k])
            )
            return r1, r2

    with workprec(precision_bits):
        hh = as_mpf(h)
    r1a, r2a = residuals(hh)
    r1b, r2b = residuals(hh / 2)
    return (r1a, r1b), (r2a, r2b)


def limit_defect(n_total: int, omega, sample_points, precision_bits: int = None):
    """Deviation of p_{2n} from its high-frequency Laguerre-product limit.

    The limit polynomial is the product L_n(-i omega (x+1)) L_n(-i omega (x-1))
    rescaled by (n!)^2 (i/omega)^{2n}, i.e. normalized to be monic like
    p_{2n} itself; its roots are exactly the superinterpolation points.
    Deviations are measured at the sample points relative to
    max(|p|, omega^{-2n}).
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    if n_total % 2 != 0 or n_total < 2:
        raise ValueError("n_total must be even and >= 2")
    n = n_total // 2
    p = orthogonal_polynomial(n_total, omega, precision_bits)
    with workprec(precision_bits):
        w = as_mpf(omega)
        i_unit = mp.mpc(0, 1)
        monic_factor = mp.factorial(n) ** 2
        scale_floor = w ** (-n_total)
        worst = mp.mpf(0)
        for x in sample_points:
            xc = mp.mpc(x)
            pv = poly_eval(p, xc)
            lim = (
                monic_factor
                * (i_unit / w) ** n_total
                * laguerre_eval(n, -i_unit * w * (xc + 1), precision_bits)
                * laguerre_eval(n, -i_unit * w * (xc - 1), precision_bits)
            )
            defect = abs(pv - lim) / max(abs(pv), scale_floor)
            worst = max(worst, defect)
    return worst
