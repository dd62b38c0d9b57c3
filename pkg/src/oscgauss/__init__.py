"""Gaussian quadrature for the oscillatory weight exp(i*omega*x) on [-1, 1].

Configurable-precision construction and validation of oscillatory Gaussian
rules, the complex orthogonal polynomials behind them, their breakdown
frequencies, and their high-frequency limits toward steepest-descent /
superinterpolation rules.
"""

from .analysis import (
    BreakdownRecord,
    OrderFit,
    asymptotic_order,
    breakdown_scan,
    check_coeff_recurrences,
    check_derivative_identity,
    limit_defect,
    superinterp_distance,
)
from .moments import MomentTable, moment_closed_form, moment_table
from .oracle import (
    ReferenceValue,
    ToleranceUnreachableError,
    laguerre_eval,
    reference_integral,
)
from .orthopoly import (
    MonicPolynomial,
    NonExistentError,
    RecurrenceCoeffs,
    norm_sq,
    orthogonal_polynomial,
    pairing,
    poly_eval,
    recurrence_coeffs,
    symmetry_defect,
)
from .precision import DEFAULT_PRECISION_BITS, default_precision_bits
from .roots import RootConvergenceError, Trajectory, continue_roots, polynomial_roots
from .rules import (
    Integrand,
    QuadratureRule,
    WeightSolveError,
    apply_rule,
    gauss_laguerre,
    gauss_legendre,
    gauss_oscillatory,
    interpolatory_weights,
    parse_integrand,
    steepest_descent_eval,
    superinterpolation_rule,
)

__all__ = [
    "BreakdownRecord",
    "DEFAULT_PRECISION_BITS",
    "Integrand",
    "MomentTable",
    "MonicPolynomial",
    "NonExistentError",
    "OrderFit",
    "QuadratureRule",
    "RecurrenceCoeffs",
    "ReferenceValue",
    "RootConvergenceError",
    "ToleranceUnreachableError",
    "Trajectory",
    "WeightSolveError",
    "apply_rule",
    "asymptotic_order",
    "breakdown_scan",
    "check_coeff_recurrences",
    "check_derivative_identity",
    "continue_roots",
    "default_precision_bits",
    "gauss_laguerre",
    "gauss_legendre",
    "gauss_oscillatory",
    "interpolatory_weights",
    "laguerre_eval",
    "limit_defect",
    "moment_closed_form",
    "moment_table",
    "norm_sq",
    "orthogonal_polynomial",
    "pairing",
    "parse_integrand",
    "poly_eval",
    "polynomial_roots",
    "recurrence_coeffs",
    "reference_integral",
    "steepest_descent_eval",
    "superinterp_distance",
    "superinterpolation_rule",
    "symmetry_defect",
]

__version__ = "0.1.0"
