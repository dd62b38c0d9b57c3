"""Moments of the oscillatory weight exp(i*omega*x) on [-1, 1].

The m-th moment is mu_m = int_{-1}^{1} x^m exp(i*omega*x) dx.  Three
evaluation paths are combined so that no (m, omega) region loses digits:

* omega == 0: exact Legendre moments 2/(m+1) (even m) and 0 (odd m).
* 0 < omega < SMALL_OMEGA: Taylor series of the integral in omega, whose
  terms are 2*(i*omega)^k / (k! * (m+k+1)) for m+k even.
* otherwise: the integration-by-parts recurrence, run forward for m below
  the frequency and backward (seeded by the closed form at m_max plus a
  guard band) above it, where each direction is stable.

The closed form uses the upper incomplete gamma at integer first argument,
Gamma(1+m, z) = m! * exp(-z) * sum_{k<=m} z^k / k!, which is exact in the
working precision; internal guard digits absorb the cancellation between
the two gamma terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp

from .precision import (
    MIN_PRECISION_BITS,
    as_mpf,
    decimal_digits,
    default_precision_bits,
    validate_precision,
    workprec,
)

SMALL_OMEGA = 0.25
BACKWARD_GUARD = 10
CROSSOVER_BAND = 2


@dataclass(frozen=True)
class MomentTable:
    """Complex moments mu_0..mu_m_max of exp(i*omega*x) at one frequency."""

    omega: object
    m_max: int
    values: tuple
    precision_bits: int
    certified_digits: int

    def __getitem__(self, m: int):
        return self.values[m]

    def __len__(self) -> int:
        return self.m_max + 1

    def to_json_dict(self) -> dict:
        return {
            "omega": float(self.omega),
            "m_max": self.m_max,
            "precision_bits": self.precision_bits,
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        }


def _validate(m_max: int, precision_bits: int) -> int:
    if m_max < 0:
        raise ValueError(f"m_max must be nonnegative, got {m_max}")
    return validate_precision(precision_bits)


def _gamma_upper_int(m: int, z):
    """Gamma(1+m, z) = m! e^{-z} sum_{k=0}^{m} z^k/k! at the current precision."""
    term = mp.mpf(1)
    acc = mp.mpf(1)
    for k in range(1, m + 1):
        term = term * z / k
        acc = acc + term
    return mp.factorial(m) * mp.exp(-z) * acc


def _cancellation_bits(m: int, omega: float) -> int:
    """Bits lost to cancellation in the closed form; |terms| ~ m! e^omega / omega^{m+1}."""
    if omega <= 0:
        return 0
    nats = math.lgamma(m + 1) + omega - (m + 1) * math.log(omega)
    if nats <= 0:
        return 0
    return int(nats / math.log(2)) + 8


def moment_closed_form(m: int, omega, precision_bits: int = None):
    """mu_m via the incomplete-gamma closed form, at the requested precision.

    Internally escalates by the estimated cancellation so the returned value
    is accurate to nearly the full requested precision for any (m, omega).
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    _validate(m, precision_bits)
    if not float(omega) > 0:
        raise ValueError(f"moment_closed_form requires omega > 0, got {omega}")
    guard = _cancellation_bits(m, float(omega)) + 32
    with workprec(precision_bits + guard):
        w = as_mpf(omega)
        iw = mp.mpc(0, 1) * w
        g_minus = _gamma_upper_int(m, -iw)
        g_plus = _gamma_upper_int(m, iw)
        value = (-1) ** m * iw ** (-1 - m) * (g_minus - g_plus)
    with workprec(precision_bits):
        return +value


def _legendre_moments(m_max: int):
    return tuple(
        mp.mpc(2) / (m + 1) if m % 2 == 0 else mp.mpc(0) for m in range(m_max + 1)
    )


def _series_moment(m: int, w):
    """Taylor series of mu_m in omega; only terms with m+k even survive."""
    iw = mp.mpc(0, 1) * w
    k0 = 0 if m % 2 == 0 else 1
    term = iw ** k0 / mp.factorial(k0)
    acc = mp.mpc(0)
    cutoff = mp.mpf(2) ** (-(mp.prec + 8))
    k = k0
    while True:
        acc += 2 * term / (m + k + 1)
        # advance two orders to the next surviving term
        term = term * iw * iw / ((k + 1) * (k + 2))
        k += 2
        if abs(term) < cutoff and k > abs(w):
            break
        if k > 10000:  # unreachable for omega < 1; defensive
            break
    return acc


def _boundary_numerator(m: int, e_plus, e_minus):
    # e^{i w} - (-1)^m e^{-i w}
    return e_plus - e_minus if m % 2 == 0 else e_plus + e_minus


def _recurrence_values(omega, m_max: int, wp: int, precision_bits: int):
    """Forward/backward recurrence table plus the direction cross-check."""
    with workprec(wp):
        w = as_mpf(omega)
        iw = mp.mpc(0, 1) * w
        e_plus = mp.exp(iw)
        e_minus = mp.exp(-iw)

        crossover = max(1, int(mp.ceil(w)))
        fwd_end = min(m_max, crossover - 1 + CROSSOVER_BAND)
        band_lo = max(0, min(crossover, m_max) - CROSSOVER_BAND)

        forward = [mp.mpc(2) * mp.sin(w) / w]
        for m in range(1, fwd_end + 1):
            num = _boundary_numerator(m, e_plus, e_minus)
            forward.append((num - m * forward[m - 1]) / iw)

        seed_idx = m_max + BACKWARD_GUARD
        backward = {seed_idx: moment_closed_form(seed_idx, omega, wp)}
        for m in range(seed_idx, band_lo, -1):
            num = _boundary_numerator(m, e_plus, e_minus)
            backward[m - 1] = (num - iw * backward[m]) / m

        values = []
        for m in range(m_max + 1):
            if m < crossover:
                values.append(forward[m])
            else:
                values.append(backward[m])

        diffs = []
        for m in range(band_lo, fwd_end + 1):
            if m < len(forward) and m in backward:
                scale = max(abs(forward[m]), abs(backward[m]), mp.mpf(1) / 10**9)
                diffs.append(abs(forward[m] - backward[m]) / scale)
        max_diff = max(diffs) if diffs else mp.mpf(2) ** (-wp)
    return values, max_diff


def moment_table(
    omega, m_max: int, precision_bits: int = None, method: str = "auto"
) -> MomentTable:
    """Build the moment table mu_0..mu_m_max at one frequency.

    ``method`` is exposed for validation only: "series" and "recurrence"
    force the corresponding path where both are defined.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    _validate(m_max, precision_bits)
    wp = precision_bits + 32
    omega_f = float(omega)
    if omega_f < 0:
        raise ValueError(f"omega must be nonnegative, got {omega}")

    if omega_f == 0.0:
        with workprec(precision_bits):
            values = _legendre_moments(m_max)
        return MomentTable(
            omega=as_mpf(0),
            m_max=m_max,
            values=values,
            precision_bits=precision_bits,
            certified_digits=decimal_digits(precision_bits),
        )

    use_series = omega_f < SMALL_OMEGA if method == "auto" else method == "series"
    if method not in ("auto", "series", "recurrence"):
        raise ValueError(f"unknown method {method!r}")

    if use_series:
        with workprec(wp):
            w = as_mpf(omega)
            values = [_series_moment(m, w) for m in range(m_max + 1)]
            # the finite gamma sum is an independent evaluation path
            diffs = []
            for m in {0, min(1, m_max), min(3, m_max)}:
                ref = moment_closed_form(m, omega, wp)
                scale = max(abs(ref), mp.mpf(1) / 10**9)
                diffs.append(abs(values[m] - ref) / scale)
            max_diff = max(diffs)
    else:
        values, max_diff = _recurrence_values(omega, m_max, wp, precision_bits)

    certified = _digits_from_discrepancy(max_diff, precision_bits)
    with workprec(precision_bits):
        w = as_mpf(omega)
        rounded = tuple(+v for v in values)
    return MomentTable(
        omega=w,
        m_max=m_max,
        values=rounded,
        precision_bits=precision_bits,
        certified_digits=certified,
    )


def _digits_from_discrepancy(max_diff, precision_bits: int) -> int:
    cap = decimal_digits(precision_bits)
    if max_diff <= 0:
        return cap
    with workprec(64):
        est = int(-mp.log10(max_diff))
    return max(0, min(cap, est))
