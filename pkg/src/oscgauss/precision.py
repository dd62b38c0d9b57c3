"""Working-precision plumbing shared by every module.

All numerical code in this package runs under an explicit binary precision
(`precision_bits`), managed through mpmath's ``workprec`` context.  Nothing
here mutates the global mpmath precision outside a context manager, so
concurrent calls at different precisions are safe.
"""
from __future__ import annotations

import math
import os

from mpmath import mp, mpf

DEFAULT_PRECISION_BITS = 256
MIN_PRECISION_BITS = 64
MAX_PRECISION_BITS = 4096

#: decimal digits per bit
_LOG10_2 = math.log10(2.0)


def default_precision_bits() -> int:
    """Default working precision, overridable via OSCGAUSS_PRECISION."""
    raw = os.environ.get("OSCGAUSS_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise ValueError(f"OSCGAUSS_PRECISION must be an integer, got {raw!r}")
    return validate_precision(bits)


def validate_precision(bits: int) -> int:
    if not (MIN_PRECISION_BITS <= bits <= MAX_PRECISION_BITS):
        raise ValueError(
            f"precision_bits must lie in [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}], got {bits}"
        )
    return bits


def decimal_digits(bits: int) -> int:
    """Decimal digits representable at a given binary precision."""
    return int(bits * _LOG10_2)


def workprec(bits: int):
    """Context manager setting the mpmath working precision."""
    return mp.workprec(bits)


def as_mpf(x) -> mpf:
    """Convert a scalar to mpf at the current working precision.

    Floats and ints convert exactly; strings are parsed at the current
    precision, so re-converting the original input after a precision
    escalation keeps all available digits.
    """
    return mpf(x)


def nstr_fixed(x, digits: int) -> str:
    """Deterministic decimal rendering with a fixed significant-digit count."""
    digits = max(3, min(digits, 50))
    return mp.nstr(x, digits, strip_zeros=False)
