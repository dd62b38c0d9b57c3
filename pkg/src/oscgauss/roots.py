"""Root finding for the orthogonal polynomials and trajectory tracing in omega.

All roots of a polynomial are found simultaneously by Aberth-Ehrlich
iteration at working precision.  Trajectories x_j(omega) are traced by
continuation: each grid step is seeded with the previous step's roots and
matched to them by optimal assignment, so the paths stay continuous even
when they swap order or pinch together at cusps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp
from scipy.optimize import linear_sum_assignment

from .classical import legendre_nodes_weights
from .orthopoly import (
    MonicPolynomial,
    NonExistentError,
    orthogonal_polynomial,
    poly_derivative_coeffs,
)
from .precision import decimal_digits, default_precision_bits, workprec

MAX_ABERTH_ITER = 400
AMBIGUITY_FACTOR = 1.10
BISECTION_DEPTH = 8
SPEED_THRESHOLD_REL = 1e-2


class RootConvergenceError(Exception):
    """Aberth iteration did not converge; carries the best iterates."""

    def __init__(self, roots, residuals, iterations):
        self.roots = roots
        self.residuals = residuals
        self.iterations = iterations
        worst = max(residuals) if residuals else mp.mpf("nan")
        super().__init__(
            f"root iteration stalled after {iterations} steps "
            f"(worst residual {mp.nstr(worst, 5)})"
        )


def _horner(coeffs, z):
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _default_seeds(n: int, coeffs, precision_bits: int):
    """Gauss-Legendre nodes scaled by the Cauchy root-radius bound."""
    radius = 1 + max((abs(c) for c in coeffs[:-1]), default=mp.mpf(0))
    gl = legendre_nodes_weights(n, 128)[0]
    return [mp.mpc(x) * radius for x in gl]


def polynomial_roots(p: MonicPolynomial, seeds=None, precision_bits: int = None):
    """All complex roots of a monic polynomial by Aberth-Ehrlich iteration.

    ``seeds`` (continuation) initialize the iteration when given; otherwise
    scaled Gauss-Legendre nodes are used.  Roots are returned sorted by
    (real, imaginary) part; residuals |p(x_j)| are checked internally.
    """
    if precision_bits is None:
        precision_bits = p.precision_bits
    n = p.degree
    wp = precision_bits + 32
    with workprec(wp):
        coeffs = p.full_coeffs()
        if n == 1:
            return [mp.mpc(-coeffs[0])]
        dcoeffs = poly_derivative_coeffs(coeffs)
        if seeds is not None:
            z = [mp.mpc(s) for s in seeds]
            if len(z) != n:
                raise ValueError(f"need {n} seeds, got {len(z)}")
            # exactly coincident seeds stall the pairwise sums
            for i in range(n):
                for j in range(i):
                    if z[i] == z[j]:
                        z[i] += mp.mpf(2) ** (-precision_bits // 2)
        else:
            z = _default_seeds(n, coeffs, precision_bits)
            # symmetric real seeds can sit on symmetry lines; nudge off axis
            z = [zi + mp.mpc(0, 1) * mp.mpf(2) ** (-8) * (i + 1) for i, zi in enumerate(z)]

        step_tol = mp.mpf(2) ** (-(precision_bits + 8))
        stagnation = mp.mpf(2) ** (-(precision_bits // 2))
        prev_step = None
        for it in range(MAX_ABERTH_ITER):
            worst_step = mp.mpf(0)
            for j in range(n):
                pv = _horner(coeffs, z[j])
                dv = _horner(dcoeffs, z[j])
                if dv == 0:
                    z[j] += step_tol
                    worst_step = max(worst_step, abs(step_tol))
                    continue
                newton = pv / dv
                s = mp.mpc(0)
                for k in range(n):
                    if k != j:
                        s += 1 / (z[j] - z[k])
                denom = 1 - newton * s
                delta = newton if denom == 0 else newton / denom
                z[j] -= delta
                worst_step = max(worst_step, abs(delta))
            scale = max(1, max(abs(v) for v in z))
            if worst_step < step_tol * scale:
                break
            # steps at the rounding floor stop shrinking; the residual
            # check below decides whether that is good enough
            if prev_step is not None and worst_step >= prev_step and worst_step < stagnation * scale:
                break
            prev_step = worst_step
        else:
            res = [abs(_horner(coeffs, v)) for v in z]
            raise RootConvergenceError(z, res, MAX_ABERTH_ITER)

        roots = sorted(z, key=lambda v: (float(v.real), float(v.imag)))
        tol = mp.mpf(10) ** (-(decimal_digits(precision_bits) // 2))
        for r in roots:
            resid = abs(_horner(coeffs, r))
            scale = max(1, abs(_horner(dcoeffs, r)))
            if resid > tol * scale:
                raise RootConvergenceError(
                    roots, [abs(_horner(coeffs, v)) for v in roots], it + 1
                )
    return roots


@dataclass(frozen=True)
class Trajectory:
    """Matched root paths x_j(omega) over an ascending frequency grid."""

    n: int
    omegas: tuple
    paths: tuple            # paths[j][i]: root j at omegas[i], or None
    cusp_candidates: tuple  # grid indices where some path speed collapses
    nonexistent: tuple      # grid indices where the polynomial failed
    ambiguous: tuple        # grid indices where matching stayed ambiguous

    def speeds(self):
        """|dx_j/domega| per path by central differences (float)."""
        m = len(self.omegas)
        out = []
        for path in self.paths:
            sp = [float("nan")] * m
            for i in range(m):
                lo, hi = max(0, i - 1), min(m - 1, i + 1)
                if path[lo] is None or path[hi] is None or hi == lo:
                    continue
                dw = float(self.omegas[hi]) - float(self.omegas[lo])
                sp[i] = abs(complex(path[hi]) - complex(path[lo])) / dw
            out.append(sp)
        return out

    def csv_rows(self, digits: int = 17):
        """Rows (omega, root_index, re, im, speed) in grid order."""
        speeds = self.speeds()
        for i, w in enumerate(self.omegas):
            for j, path in enumerate(self.paths):
                z = path[i]
                if z is None:
                    continue
                yield (
                    mp.nstr(w, digits),
                    j,
                    mp.nstr(z.real, digits),
                    mp.nstr(z.imag, digits),
                    repr(speeds[j][i]),
                )


def _match(prev, new):
    """Optimal assignment of new roots to previous ones; returns order + ambiguity."""
    n = len(prev)
    cost = np.empty((n, n))
    for i, a in enumerate(prev):
        for j, b in enumerate(new):
            cost[i, j] = abs(complex(a) - complex(b))
    rows, cols = linear_sum_assignment(cost)
    order = [0] * n
    ambiguous = False
    for i, j in zip(rows, cols):
        order[i] = j
        d1 = cost[i, j]
        others = [cost[i, k] for k in range(n) if k != j]
        if others:
            d2 = min(others)
            scale = max(d1, 1e-13)
            if d1 > 1e-9 and d2 < AMBIGUITY_FACTOR * scale:
                ambiguous = True
    return order, ambiguous


def _roots_at(n, omega, seeds, precision_bits):
    p = orthogonal_polynomial(n, omega, precision_bits)
    return polynomial_roots(p, seeds=seeds, precision_bits=precision_bits)


def continue_roots(n: int, omega_grid, precision_bits: int = None) -> Trajectory:
    """Trace all n root paths over an ascending omega grid by continuation.

    The first grid point must lie at or below 0.1 so Gauss-Legendre seeding
    is valid.  Matching ambiguities trigger local bisection in omega up to a
    depth limit before the step is flagged.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    grid = [float(w) for w in omega_grid]
    if len(grid) < 2:
        raise ValueError("omega grid needs at least two points")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("omega grid must be strictly ascending")
    if grid[0] > 0.1:
        raise ValueError("grid must start at omega <= 0.1 for Legendre seeding")

    paths = [[] for _ in range(n)]
    nonexistent, ambiguous_idx = [], []
    current = None  # roots ordered by path index
    for i, w in enumerate(grid):
        try:
            new = _roots_at(n, w, current, precision_bits)
        except NonExistentError:
            nonexistent.append(i)
            for path in paths:
                path.append(None)
            continue
        if current is None:
            ordered = sorted(new, key=lambda v: (float(v.real), float(v.imag)))
        else:
            ordered, ambig = _step_with_refinement(
                n, grid[i - 1], w, current, new, precision_bits
            )
            if ambig:
                ambiguous_idx.append(i)
        for j in range(n):
            paths[j].append(ordered[j])
        current = ordered

    traj = Trajectory(
        n=n,
        omegas=tuple(mp.mpf(w) for w in grid),
        paths=tuple(tuple(p) for p in paths),
        cusp_candidates=(),
        nonexistent=tuple(nonexistent),
        ambiguous=tuple(ambiguous_idx),
    )
    return _with_cusps(traj)


def _step_with_refinement(n, w_prev, w_next, current, new, precision_bits, depth=0):
    order, ambig = _match(current, new)
    if not ambig or depth >= BISECTION_DEPTH:
        return [new[j] for j in order], ambig
    w_mid = 0.5 * (w_prev + w_next)
    try:
        mid_roots = _roots_at(n, w_mid, current, precision_bits)
    except NonExistentError:
        return [new[j] for j in order], True
    mid_ordered, ambig_a = _step_with_refinement(
        n, w_prev, w_mid, current, mid_roots, precision_bits, depth + 1
    )
    final, ambig_b = _step_with_refinement(
        n, w_mid, w_next, mid_ordered, new, precision_bits, depth + 1
    )
    return final, ambig_a or ambig_b


def _with_cusps(traj: Trajectory) -> Trajectory:
    """Flag local speed minima below the relative threshold as cusp candidates."""
    speeds = traj.speeds()
    m = len(traj.omegas)
    flagged = set()
    for sp in speeds:
        finite = sorted(s for s in sp if not math.isnan(s))
        if not finite:
            continue
        median = finite[len(finite) // 2]
        if median <= 0:
            continue
        cut = SPEED_THRESHOLD_REL * median
        i = 0
        while i < m:
            if not math.isnan(sp[i]) and sp[i] < cut:
                j = i
                while j + 1 < m and not math.isnan(sp[j + 1]) and sp[j + 1] < cut:
                    j += 1
                cluster = range(i, j + 1)
                flagged.add(min(cluster, key=lambda k: sp[k]))
                i = j + 1
            else:
                i += 1
    return Trajectory(
        n=traj.n,
        omegas=traj.omegas,
        paths=traj.paths,
        cusp_candidates=tuple(sorted(flagged)),
        nonexistent=traj.nonexistent,
        ambiguous=traj.ambiguous,
    )
