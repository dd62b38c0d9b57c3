"""Independent reference values for I[f] = int_{-1}^1 f(x) exp(i*omega*x) dx.

Every other module is certified against this one, so it must not share
failure modes with them.  Method A is composite Gauss-Legendre with at
most half an oscillation period per panel and fixed per-panel order 30,
refined by panel doubling; it touches neither the moment recurrences nor
the Hankel systems.  Method B, available for omega >= 5 and integrands
analytic in the deformation strip, is the steepest-descent evaluation
with escalating point count; it supplies the cross-check that feeds
est_error.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from mpmath import mp

from .classical import laguerre_nodes_weights, legendre_nodes_weights
from .classical import laguerre_eval as _laguerre_recurrence
from .precision import as_mpf, default_precision_bits, workprec
from .rules import Integrand

PANEL_ORDER = 30
MAX_DOUBLINGS = 12
METHOD_B_MIN_OMEGA = 5.0


class ToleranceUnreachableError(Exception):
    """Requested tolerance could not be certified."""


@dataclass(frozen=True)
class ReferenceValue:
    value: object
    est_error: object
    method_a: str
    method_b: str

    def __complex__(self):
        return complex(self.value)


def laguerre_eval(n: int, z, precision_bits: int = None):
    """Classical Laguerre polynomial by the stable three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if precision_bits is None:
        precision_bits = default_precision_bits()
    with workprec(precision_bits):
        return _laguerre_recurrence(n, mp.mpc(z))


@lru_cache(maxsize=16)
def _panel_nodes(precision_bits: int):
    return legendre_nodes_weights(PANEL_ORDER, precision_bits)


def _composite_panels(f: Integrand, w, panels: int):
    """Composite rule over `panels` uniform panels of [-1, 1].

    The oscillatory factor is advanced panel-to-panel by one complex
    multiplication (exp(i*w*x) factors through the uniform grid), and for
    sin/cos the amplitude is advanced the same way via angle addition, so
    no per-node transcendental calls remain in the hot path.
    """
    s_nodes, s_weights = _panel_nodes(mp.prec)
    h = mp.mpf(2) / panels
    half = h / 2
    # per-node offsets within a panel and their phase/weight factors
    offsets = [half * (s + 1) for s in s_nodes]
    cfac = [wt * half * mp.exp(mp.mpc(0, 1) * w * d) for wt, d in zip(s_weights, offsets)]
    ratio = mp.exp(mp.mpc(0, 1) * w * h)
    base_phase = mp.exp(mp.mpc(0, -1) * w)  # exp(i*w*(-1))

    fast_trig = f.key in ("sin", "cos")
    if fast_trig:
        sin_off = [mp.sin(d) for d in offsets]
        cos_off = [mp.cos(d) for d in offsets]
        sin_h, cos_h = mp.sin(h), mp.cos(h)
        sin_a, cos_a = mp.sin(mp.mpf(-1)), mp.cos(mp.mpf(-1))

    total = mp.mpc(0)
    a = mp.mpf(-1)
    phase = base_phase
    for k in range(panels):
        panel_sum = mp.mpc(0)
        if fast_trig:
            if f.key == "sin":
                for j in range(PANEL_ORDER):
                    val = sin_a * cos_off[j] + cos_a * sin_off[j]
                    panel_sum += cfac[j] * val
            else:
                for j in range(PANEL_ORDER):
                    val = cos_a * cos_off[j] - sin_a * sin_off[j]
                    panel_sum += cfac[j] * val
            sin_a, cos_a = sin_a * cos_h + cos_a * sin_h, cos_a * cos_h - sin_a * sin_h
        else:
            for j in range(PANEL_ORDER):
                panel_sum += cfac[j] * f(a + offsets[j])
        total += phase * panel_sum
        phase *= ratio
        a += h
    return total


def _method_b(f: Integrand, w, tol, precision_bits: int):
    """Steepest descent with escalating point count until stable."""
    prev = None
    n_half = 4
    while n_half <= 96:
        xi, eta = laguerre_nodes_weights(n_half, precision_bits)
        i_unit = mp.mpc(0, 1)
        s_left = mp.mpc(0)
        s_right = mp.mpc(0)
        for x, e in zip(xi, eta):
            t = i_unit * x / w
            s_left += e * f(-1 + t)
            s_right += e * f(1 + t)
        value = (
            i_unit * mp.exp(-i_unit * w) / w * s_left
            - i_unit * mp.exp(i_unit * w) / w * s_right
        )
        if prev is not None and abs(value - prev) <= tol / 2:
            return value
        prev = value
        n_half = max(n_half + 2, int(n_half * 3 // 2))
    return None


def reference_integral(f: Integrand, omega, tol, precision_bits: int = None) -> ReferenceValue:
    """Certified value of I[f] with est_error from two independent paths.

    Results are cached: the oracle is pure, and error sweeps for several
    rule families revisit the same frequencies.
    """
    try:
        return _reference_cached(f, as_mpf(omega), float(tol), precision_bits)
    except TypeError:
        return _reference_uncached(f, omega, tol, precision_bits)


@lru_cache(maxsize=1024)
def _reference_cached(f, omega, tol, precision_bits):
    return _reference_uncached(f, omega, tol, precision_bits)


def _reference_uncached(f: Integrand, omega, tol, precision_bits: int = None) -> ReferenceValue:
    tol_f = float(tol)
    if not tol_f > 0:
        raise ValueError("tol must be positive")
    bits_needed = int(-mp.log(tol_f, 2)) + 48 if tol_f < 1 else 64
    wp = max(precision_bits or 0, bits_needed, 64)
    if tol_f < 10.0 ** (-(wp * 0.30103 - 10)):
        raise ToleranceUnreachableError(
            f"tol {tol} below what {wp} bits can certify"
        )

    with workprec(wp):
        w = as_mpf(omega)
        tol_mp = mp.mpf(tol_f)
        if w < 0:
            raise ValueError("omega must be nonnegative")
        panels = 1 if w <= mp.pi else int(mp.ceil(2 * w / mp.pi))
        prev = _composite_panels(f, w, panels)
        value = None
        for _ in range(MAX_DOUBLINGS):
            panels *= 2
            cur = _composite_panels(f, w, panels)
            diff = abs(cur - prev)
            if diff <= tol_mp / 2:
                value = cur
                break
            prev = cur
        if value is None:
            raise ToleranceUnreachableError(
                f"panel refinement stalled at {panels} panels (last diff {mp.nstr(diff, 5)})"
            )

        method_b = "refinement"
        est = diff
        if float(w) >= METHOD_B_MIN_OMEGA and f.entire_strip and float(w) > f.growth_rate:
            b_val = _method_b(f, w, tol_mp, wp)
            if b_val is not None:
                est = abs(value - b_val)
                method_b = "steepest-descent"
        if est > tol_mp:
            raise ToleranceUnreachableError(
                f"cross-check disagreement {mp.nstr(est, 5)} above tol {tol}"
            )
        return ReferenceValue(
            value=value,
            est_error=est,
            method_a=f"composite-gl{PANEL_ORDER}",
            method_b=method_b,
        )
