"""Monic polynomials orthogonal to exp(i*omega*x) on [-1, 1].

Construction always goes through the Hankel system in the moments, never
through the three-term recurrence: the recurrence breaks down at countably
many frequencies while the moment route survives.  The bilinear pairing
(f, g) = int f g exp(i*omega*x) dx is not positive definite, so the
"norm" (p_n, p_n) may vanish; nonexistence of a polynomial is a real
mathematical outcome reported as :class:`NonExistentError`.
"""
from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .moments import MomentTable, moment_table
from .precision import (
    as_mpf,
    decimal_digits,
    default_precision_bits,
    validate_precision,
    workprec,
)

SOLVE_GUARD_BITS = 32
MAX_ESCALATIONS = 4


class NonExistentError(Exception):
    """The requested polynomial does not exist at the requested precision.

    ``min_pivot`` is the smallest-singular-value proxy from the full-pivot
    elimination; ``kind`` distinguishes a structurally singular system
    ("singular") from one whose residual could not be driven down within
    the escalation budget ("ill-conditioned").
    """

    def __init__(self, degree, omega, min_pivot, kind="singular", detail=""):
        self.degree = degree
        self.omega = omega
        self.min_pivot = float(min_pivot)
        self.kind = kind
        msg = (
            f"orthogonal polynomial of degree {degree} does not exist at "
            f"omega={mp.nstr(as_mpf(omega), 17)} ({kind}; min pivot {self.min_pivot:.3e})"
        )
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class MonicPolynomial:
    """x^n + sum a_k x^k with complex a_k, orthogonal at one frequency."""

    degree: int
    coeffs: tuple
    omega: object
    precision_bits: int
    condition_estimate: float
    certified_digits: int

    def full_coeffs(self) -> tuple:
        """Ascending coefficients including the leading 1."""
        return self.coeffs + (mp.mpc(1),)

    def to_json_dict(self) -> dict:
        return {
            "n": self.degree,
            "omega": float(self.omega),
            "precision_bits": self.precision_bits,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            "condition_estimate": self.condition_estimate,
        }


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """alpha_k and beta_k of the three-term recurrence, while they exist."""

    omega: object
    alpha: tuple
    beta: tuple
    defined_up_to: int


def solve_full_pivot(rows, rhs):
    """Gaussian elimination with full pivoting over mpmath complex numbers.

    Returns (solution, min_pivot, max_pivot).  Raises ZeroDivisionError via
    the caller's pivot check rather than dividing by an exact zero pivot.
    """
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    perm = list(range(n))
    min_piv = None
    max_piv = mp.mpf(0)
    for col in range(n):
        pr, pc, best = col, col, mp.mpf(-1)
        for i in range(col, n):
            for j in range(col, n):
                v = abs(a[i][j])
                if v > best:
                    pr, pc, best = i, j, v
        if pr != col:
            a[col], a[pr] = a[pr], a[col]
        if pc != col:
            for row in a:
                row[col], row[pc] = row[pc], row[col]
            perm[col], perm[pc] = perm[pc], perm[col]
        piv = abs(a[col][col])
        min_piv = piv if min_piv is None or piv < min_piv else min_piv
        max_piv = piv if piv > max_piv else max_piv
        if piv == 0:
            return None, min_piv, max_piv
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            f = a[i][col] * inv
            if f == 0:
                continue
            for j in range(col, n + 1):
                a[i][j] -= f * a[col][j]
    x = [mp.mpc(0)] * n
    for i in range(n - 1, -1, -1):
        s = a[i][n]
        for j in range(i + 1, n):
            s -= a[i][j] * x[j]
        x[i] = s / a[i][i]
    out = [mp.mpc(0)] * n
    for k in range(n):
        out[perm[k]] = x[k]
    return out, min_piv, max_piv


def _orthogonality_residual(coeffs, table: MomentTable, n: int):
    worst = mp.mpf(0)
    for j in range(n):
        s = table[n + j]
        for k in range(n):
            s += coeffs[k] * table[k + j]
        worst = max(worst, abs(s))
    return worst


def orthogonal_polynomial(n: int, omega, precision_bits: int = None) -> MonicPolynomial:
    """Solve the n x n Hankel system for the monic orthogonal polynomial.

    The solve escalates precision until the orthogonality residual meets the
    target; a system that is singular at the *requested* precision raises
    NonExistentError immediately (expected e.g. for n=1 at omega = k*pi).
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    validate_precision(precision_bits)
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")

    digits = decimal_digits(precision_bits)
    target = mp.mpf(10) ** (-(digits // 2))
    singular_cut = mp.mpf(10) ** (-(digits / 2))

    wp = precision_bits + SOLVE_GUARD_BITS
    for attempt in range(MAX_ESCALATIONS + 1):
        table = moment_table(omega, 2 * n - 1, wp)
        with workprec(wp):
            rows = [[table[j + k] for k in range(n)] for j in range(n)]
            rhs = [-table[n + j] for j in range(n)]
            coeffs, min_piv, max_piv = solve_full_pivot(rows, rhs)
        if attempt == 0:
            rel = min_piv / max(mp.mpf(1), max_piv) if min_piv is not None else mp.mpf(0)
            if coeffs is None or rel <= singular_cut:
                raise NonExistentError(n, omega, rel, kind="singular")
        if coeffs is None:
            raise NonExistentError(n, omega, 0.0, kind="singular")

        check_table = moment_table(omega, 2 * n - 1, 2 * wp)
        with workprec(2 * wp):
            residual = _orthogonality_residual(coeffs, check_table, n)
        if residual <= target:
            cond = float(max_piv / min_piv) if min_piv > 0 else float("inf")
            with workprec(64):
                res_digits = digits if residual == 0 else int(-mp.log10(residual))
            certified = max(0, min(res_digits, decimal_digits(wp)))
            return MonicPolynomial(
                degree=n,
                coeffs=tuple(coeffs),
                omega=table.omega,
                precision_bits=precision_bits,
                condition_estimate=cond,
                certified_digits=certified,
            )
        wp *= 2

    raise NonExistentError(
        n,
        omega,
        min_piv,
        kind="ill-conditioned",
        detail=f"residual {mp.nstr(residual, 5)} above {mp.nstr(target, 5)} after escalation",
    )


def _coerce_scalar(c):
    # mp.mpc(x) rounds to the *ambient* precision; mpmath scalars must pass
    # through untouched so high-precision coefficients survive coercion
    if isinstance(c, (mp.mpf, mp.mpc)):
        return c
    return mp.mpc(c)


def _coeff_seq(p) -> tuple:
    """Ascending full coefficient sequence from a polynomial-like argument."""
    if isinstance(p, MonicPolynomial):
        return p.full_coeffs()
    if isinstance(p, (list, tuple)):
        return tuple(_coerce_scalar(c) for c in p)
    return (_coerce_scalar(p),)


def pairing(p, q, table: MomentTable):
    """Bilinear form (p, q) = sum_{j,k} p_j q_k mu_{j+k} from the moment table."""
    cp = _coeff_seq(p)
    cq = _coeff_seq(q)
    need = len(cp) + len(cq) - 2
    if table.m_max < need:
        raise ValueError(
            f"moment table holds mu_0..mu_{table.m_max}, need up to mu_{need}"
        )
    with workprec(table.precision_bits):
        acc = mp.mpc(0)
        for j, a in enumerate(cp):
            if a == 0:
                continue
            for k, b in enumerate(cq):
                if b == 0:
                    continue
                acc += a * b * table[j + k]
    return acc


def norm_sq(n: int, omega, precision_bits: int = None):
    """(p_n, p_n); complex-valued in general and may vanish (breakdown)."""
    if precision_bits is None:
        precision_bits = default_precision_bits()
    table = moment_table(omega, max(2 * n, 0), precision_bits)
    if n == 0:
        return table[0]
    p = orthogonal_polynomial(n, omega, precision_bits)
    return pairing(p, p, table)


def _shift_up(coeffs: tuple) -> tuple:
    """Multiply a coefficient sequence by x."""
    return (mp.mpc(0),) + coeffs


def recurrence_coeffs(k_max: int, omega, precision_bits: int = None) -> RecurrenceCoeffs:
    """alpha_0..alpha_k, beta_1..beta_k from Hankel-built polynomials.

    Stops early, recording defined_up_to, as soon as some (p_k, p_k) falls
    below the vanishing threshold relative to its predecessor.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    validate_precision(precision_bits)
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")

    digits = decimal_digits(precision_bits)
    vanish = mp.mpf(10) ** (-(digits / 2))
    table = moment_table(omega, 2 * k_max + 1, precision_bits)

    polys = [(mp.mpc(1),)]
    norms = [table[0]]
    alpha, beta = [], []
    defined = -1
    for k in range(k_max + 1):
        if k > 0:
            try:
                pk = orthogonal_polynomial(k, omega, precision_bits)
            except NonExistentError:
                break
            polys.append(pk.full_coeffs())
            norms.append(pairing(polys[k], polys[k], table))
        prev_scale = max(mp.mpf(1), abs(norms[k - 1])) if k > 0 else mp.mpf(1)
        if abs(norms[k]) < vanish * prev_scale:
            break
        with workprec(precision_bits):
            alpha.append(pairing(_shift_up(polys[k]), polys[k], table) / norms[k])
            if k > 0:
                beta.append(norms[k] / norms[k - 1])
        defined = k
    return RecurrenceCoeffs(
        omega=table.omega,
        alpha=tuple(alpha),
        beta=tuple(beta),
        defined_up_to=defined,
    )


def poly_eval(p, z):
    """Horner evaluation of a MonicPolynomial or coefficient sequence.

    Runs at the current working precision.
    """
    coeffs = _coeff_seq(p)
    zc = _coerce_scalar(z)
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * zc + c
    return acc


def poly_derivative_coeffs(coeffs: tuple) -> tuple:
    return tuple(k * coeffs[k] for k in range(1, len(coeffs)))


def symmetry_defect(p: MonicPolynomial):
    """Violation of the reflection symmetry p(z) = (-1)^n conj(p(-conj z)).

    At the coefficient level a_k must be real for n+k even and purely
    imaginary for n+k odd; returns the largest deviation.
    """
    n = p.degree
    worst = mp.mpf(0)
    for k, a in enumerate(p.coeffs):
        dev = abs(a.imag) if (n + k) % 2 == 0 else abs(a.real)
        worst = max(worst, dev)
    return worst
