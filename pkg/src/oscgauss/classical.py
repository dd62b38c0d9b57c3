"""Classical Gauss-Legendre and Gauss-Laguerre nodes at working precision.

Float64 seeds from numpy are polished by Newton iteration on the stable
three-term recurrences, which converges to full working precision in a
handful of steps.  Results are cached per (n, precision).
"""
from __future__ import annotations

from functools import lru_cache

import numpy.polynomial.laguerre as nplag
import numpy.polynomial.legendre as npleg
from mpmath import mp

from .precision import default_precision_bits, validate_precision, workprec


def legendre_eval(n: int, x):
    """(P_n(x), P_{n-1}(x)) by the three-term recurrence."""
    p_prev = mp.mpf(1)
    if n == 0:
        return p_prev, mp.mpf(0)
    p = x
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return p, p_prev


def laguerre_eval(n: int, z):
    """Classical Laguerre polynomial L_n at a real or complex argument."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    p_prev = mp.mpc(1)
    if n == 0:
        return p_prev
    p = 1 - mp.mpc(z)
    for k in range(1, n):
        p, p_prev = ((2 * k + 1 - z) * p - k * p_prev) / (k + 1), p
    return p


def _laguerre_pair(n: int, x):
    p_prev = mp.mpf(1)
    p = 1 - x
    for k in range(1, n):
        p, p_prev = ((2 * k + 1 - x) * p - k * p_prev) / (k + 1), p
    return p, p_prev


def legendre_nodes_weights(n: int, precision_bits: int = None):
    """Gauss-Legendre rule on [-1, 1]: nodes ascending, weights positive."""
    if precision_bits is None:
        precision_bits = default_precision_bits()
    return _legendre_cached(n, validate_precision(precision_bits))


@lru_cache(maxsize=64)
def _legendre_cached(n: int, precision_bits: int):
    if n < 1:
        raise ValueError("n must be >= 1")
    with workprec(precision_bits + 16):
        tol = mp.mpf(2) ** (-(precision_bits + 4))
        nodes, weights = [], []
        for seed in npleg.leggauss(n)[0]:
            x = mp.mpf(float(seed))
            for _ in range(80):
                p, p_prev = legendre_eval(n, x)
                # P'_n = n (x P_n - P_{n-1}) / (x^2 - 1)
                dp = n * (x * p - p_prev) / (x * x - 1)
                dx = p / dp
                x -= dx
                if abs(dx) < tol * max(1, abs(x)):
                    break
            p, p_prev = legendre_eval(n, x)
            dp = n * (x * p - p_prev) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    return tuple(nodes), tuple(weights)


def laguerre_nodes_weights(n: int, precision_bits: int = None):
    """Gauss-Laguerre rule for exp(-t) on [0, inf): nodes ascending."""
    if precision_bits is None:
        precision_bits = default_precision_bits()
    return _laguerre_cached(n, validate_precision(precision_bits))


@lru_cache(maxsize=64)
def _laguerre_cached(n: int, precision_bits: int):
    if n < 1:
        raise ValueError("n must be >= 1")
    with workprec(precision_bits + 16):
        tol = mp.mpf(2) ** (-(precision_bits + 4))
        nodes, weights = [], []
        for seed in nplag.laggauss(n)[0]:
            x = mp.mpf(float(seed))
            for _ in range(80):
                p, p_prev = _laguerre_pair(n, x)
                # L'_n = n (L_n - L_{n-1}) / x
                dp = n * (p - p_prev) / x
                dx = p / dp
                x -= dx
                if abs(dx) < tol * max(1, abs(x)):
                    break
            lnp1 = laguerre_eval(n + 1, x).real
            nodes.append(x)
            weights.append(x / ((n + 1) * lnp1) ** 2)
    return tuple(nodes), tuple(weights)
