"""Quadrature rule assembly and application.

Four rule families share one container: the oscillatory Gaussian rule
(nodes = roots of the orthogonal polynomial, weights by moment matching),
classical Gauss-Legendre and Gauss-Laguerre, and the superinterpolation
rule whose 2n nodes are +-1 + i*xi_j/omega built from Gauss-Laguerre.

Weights for interpolatory rules come from the transposed-Vandermonde
system against the moment table: the moments are the most accurately
known objects in the pipeline, so matching them directly beats
integrating Lagrange cardinal functions.
"""
from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .classical import laguerre_nodes_weights, legendre_nodes_weights
from .moments import MomentTable, moment_table
from .orthopoly import (
    NonExistentError,
    orthogonal_polynomial,
    solve_full_pivot,
)
from .precision import (
    as_mpf,
    decimal_digits,
    default_precision_bits,
    validate_precision,
    workprec,
)
from .roots import polynomial_roots

#: oscillatory-Gaussian nodes live near [-1,1]; anything this far out means
#: the frequency sits at a breakdown within the input's resolution
NODE_DIVERGENCE_BOUND = 1e3


class WeightSolveError(Exception):
    """Interpolatory weight system could not be solved to tolerance."""

    def __init__(self, message, condition=None):
        self.condition = condition
        super().__init__(message)


@dataclass(frozen=True)
class Integrand:
    """Registry member f(x), evaluable at complex nodes.

    growth_rate bounds |f(x+iy)| <= C exp(growth_rate*|y|); entire_strip is
    False when f has poles between [-1,1] and the raised steepest-descent
    contour, which rules out path deformation.
    """

    key: str
    param: object = None

    def __post_init__(self):
        if self.key not in _REGISTRY:
            raise ValueError(f"unknown integrand {self.key!r}")
        if self.key == "monomial" and (self.param is None or int(self.param) < 0):
            raise ValueError("monomial needs a nonnegative exponent")
        if self.key == "runge":
            if self.param is None or not float(self.param) > 0:
                raise ValueError("runge needs a pole parameter a > 0")

    @property
    def growth_rate(self) -> float:
        return 1.0 if self.key in ("sin", "cos", "exp") else 0.0

    @property
    def entire_strip(self) -> bool:
        return self.key != "runge"

    def __call__(self, z):
        return _REGISTRY[self.key](self, z)

    def label(self) -> str:
        if self.param is None:
            return self.key
        return f"{self.key}:{self.param}"


def _f_one(f, z):
    return mp.mpc(1)


def _f_monomial(f, z):
    return mp.mpc(z) ** int(f.param)


def _f_runge(f, z):
    zc = mp.mpc(z)
    a = as_mpf(f.param)
    return 1 / (zc * zc + a * a)


_REGISTRY = {
    "one": _f_one,
    "monomial": _f_monomial,
    "sin": lambda f, z: mp.sin(z),
    "cos": lambda f, z: mp.cos(z),
    "exp": lambda f, z: mp.exp(z),
    "runge": _f_runge,
}


def parse_integrand(text: str) -> Integrand:
    """Parse CLI identifiers like "sin", "monomial:3", "runge:2"."""
    key, _, param = text.partition(":")
    if key == "monomial":
        return Integrand(key, int(param)) if param else Integrand(key, 0)
    if key == "runge":
        return Integrand(key, float(param)) if param else Integrand(key, 1.0)
    if param:
        raise ValueError(f"integrand {key!r} takes no parameter")
    return Integrand(key)


@dataclass(frozen=True)
class QuadratureRule:
    kind: str
    n_points: int
    omega: object  # None for classical rules
    nodes: tuple
    weights: tuple
    precision_bits: int

    def weight_sum(self):
        with workprec(self.precision_bits):
            return sum(self.weights, mp.mpc(0))

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_points": self.n_points,
            "omega": None if self.omega is None else float(self.omega),
            "precision_bits": self.precision_bits,
            "nodes": [[float(z.real), float(z.imag)] for z in self.nodes],
            "weights": [[float(w.real), float(w.imag)] for w in self.weights],
        }


def _sorted_nodes(nodes):
    return sorted(nodes, key=lambda z: (float(z.real), float(z.imag)))


def gauss_legendre(n_points: int, precision_bits: int = None) -> QuadratureRule:
    if precision_bits is None:
        precision_bits = default_precision_bits()
    nodes, weights = legendre_nodes_weights(n_points, precision_bits)
    with workprec(precision_bits + 16):
        return QuadratureRule(
            kind="gauss-legendre",
            n_points=n_points,
            omega=None,
            nodes=tuple(mp.mpc(x) for x in nodes),
            weights=tuple(mp.mpc(w) for w in weights),
            precision_bits=precision_bits,
        )


def gauss_laguerre(n_points: int, precision_bits: int = None) -> QuadratureRule:
    if precision_bits is None:
        precision_bits = default_precision_bits()
    nodes, weights = laguerre_nodes_weights(n_points, precision_bits)
    with workprec(precision_bits + 16):
        return QuadratureRule(
            kind="gauss-laguerre",
            n_points=n_points,
            omega=None,
            nodes=tuple(mp.mpc(x) for x in nodes),
            weights=tuple(mp.mpc(w) for w in weights),
            precision_bits=precision_bits,
        )


def interpolatory_weights(nodes, table: MomentTable, precision_bits: int = None):
    """Weights making the rule exact on monomials of degree < len(nodes).

    Solves the transposed Vandermonde system sum_j w_j x_j^k = mu_k by
    full-pivot elimination, escalating precision until the residual meets
    the target.
    """
    if precision_bits is None:
        precision_bits = table.precision_bits
    validate_precision(precision_bits)
    n = len(nodes)
    if table.m_max < n - 1:
        raise ValueError(f"moment table too short: need mu_0..mu_{n - 1}")
    for i in range(n):
        for j in range(i):
            if nodes[i] == nodes[j]:
                raise WeightSolveError(f"coincident nodes at index {j}, {i}")

    digits = decimal_digits(precision_bits)
    target = mp.mpf(10) ** (-(digits // 2))
    wp = precision_bits + 32
    for attempt in range(3):
        with workprec(wp):
            zs = [mp.mpc(z) for z in nodes]
            rows = []
            pw = [mp.mpc(1)] * n
            for k in range(n):
                rows.append(list(pw))
                if k < n - 1:
                    pw = [p * z for p, z in zip(pw, zs)]
            rhs = [mp.mpc(table[k]) for k in range(n)]
            weights, min_piv, max_piv = solve_full_pivot(rows, rhs)
            if weights is None:
                raise WeightSolveError(
                    "Vandermonde system singular (nodes too close at this precision)",
                    condition=float("inf"),
                )
            resid = mp.mpf(0)
            for k in range(n):
                s = -rhs[k]
                for j in range(n):
                    s += rows[k][j] * weights[j]
                resid = max(resid, abs(s))
        if resid <= target:
            return weights
        wp *= 2
    raise WeightSolveError(
        f"weight residual {mp.nstr(resid, 5)} above target {mp.nstr(target, 5)}",
        condition=float(max_piv / min_piv) if min_piv else float("inf"),
    )


def gauss_oscillatory(
    n_points: int, omega, precision_bits: int = None
) -> QuadratureRule:
    """Gaussian rule for exp(i*omega*x): nodes are the roots of p_n.

    Rules with even n_points exist for every frequency tested; odd rules
    break down at isolated frequencies, reported as NonExistentError.
    Exactness on monomials up to degree 2n-1 is verified post hoc against
    the moment table.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    validate_precision(precision_bits)
    n = n_points
    if n < 1:
        raise ValueError("n_points must be >= 1")
    omega_f = float(omega)

    poly = orthogonal_polynomial(n, omega, precision_bits)
    seeds = None
    if omega_f > max(4.0, float(n)) and n % 2 == 0:
        si = superinterpolation_rule(n // 2, omega, precision_bits)
        seeds = si.nodes
    nodes = _sorted_nodes(polynomial_roots(poly, seeds=seeds, precision_bits=precision_bits))

    worst = max(abs(z) for z in nodes)
    if worst > NODE_DIVERGENCE_BOUND:
        raise NonExistentError(
            n,
            omega,
            0.0,
            kind="singular",
            detail=f"node diverged to |x|={mp.nstr(worst, 5)}; omega sits at a "
            "breakdown within the input's resolution",
        )

    table = moment_table(omega, max(2 * n - 1, n), precision_bits)
    weights = interpolatory_weights(nodes, table, precision_bits)
    _verify_exactness(nodes, weights, table, 2 * n - 1, precision_bits)
    return QuadratureRule(
        kind="gauss-oscillatory",
        n_points=n,
        omega=table.omega,
        nodes=tuple(nodes),
        weights=tuple(weights),
        precision_bits=precision_bits,
    )


def _verify_exactness(nodes, weights, table, degree_max, precision_bits):
    digits = decimal_digits(precision_bits)
    tol = mp.mpf(10) ** (-(digits // 2 - 6))
    with workprec(precision_bits + 32):
        pw = [mp.mpc(1)] * len(nodes)
        for k in range(degree_max + 1):
            s = -mp.mpc(table[k])
            for j, w in enumerate(weights):
                s += w * pw[j]
            if abs(s) > tol:
                raise WeightSolveError(
                    f"rule fails exactness at degree {k}: defect {mp.nstr(abs(s), 5)}"
                )
            pw = [p * mp.mpc(z) for p, z in zip(pw, nodes)]


def superinterpolation_rule(
    n_half: int, omega, precision_bits: int = None, filon_weights: bool = False
) -> QuadratureRule:
    """2*n_half nodes {-1 + i xi_j/omega} u {+1 + i xi_j/omega}.

    Default weights are the analytic steepest-descent ones,
    +- i exp(-+ i omega) eta_j / omega; ``filon_weights`` re-derives
    interpolatory weights by moment matching instead.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    validate_precision(precision_bits)
    if n_half < 1:
        raise ValueError("n_half must be >= 1")
    if not float(omega) > 0:
        raise ValueError("superinterpolation rule is undefined for omega <= 0")

    xi, eta = laguerre_nodes_weights(n_half, precision_bits)
    with workprec(precision_bits + 16):
        w = as_mpf(omega)
        i_unit = mp.mpc(0, 1)
        left = [mp.mpc(-1) + i_unit * x / w for x in xi]
        right = [mp.mpc(1) + i_unit * x / w for x in xi]
        nodes = left + right
        if filon_weights:
            table = moment_table(omega, 2 * n_half - 1, precision_bits)
            weights = interpolatory_weights(nodes, table, precision_bits)
        else:
            pre_left = i_unit * mp.exp(-i_unit * w) / w
            pre_right = -i_unit * mp.exp(i_unit * w) / w
            weights = [pre_left * e for e in eta] + [pre_right * e for e in eta]
        with workprec(precision_bits):
            nodes = [+z for z in nodes]
            weights = [+v for v in weights]
        return QuadratureRule(
            kind="superinterpolation",
            n_points=2 * n_half,
            omega=w,
            nodes=tuple(nodes),
            weights=tuple(weights),
            precision_bits=precision_bits,
        )


def apply_rule(rule: QuadratureRule, f: Integrand):
    """Weighted sum over the rule's nodes.

    For the gauss-laguerre kind the sum approximates
    int_0^inf f(t) exp(-t) dt; all other kinds target
    int_{-1}^1 f(x) exp(i*omega*x) dx.
    """
    with workprec(rule.precision_bits + 16):
        if f.key == "runge":
            a = as_mpf(f.param)
            for z in rule.nodes:
                zc = mp.mpc(z)
                if abs(zc * zc + a * a) < mp.mpf(10) ** (-12):
                    raise ValueError(
                        f"integrand pole +-{f.param}i collides with node {mp.nstr(zc, 8)}"
                    )
        acc = mp.mpc(0)
        for z, w in zip(rule.nodes, rule.weights):
            acc += w * f(z)
        with workprec(rule.precision_bits):
            return +acc


def steepest_descent_eval(f: Integrand, omega, n_half: int, precision_bits: int = None):
    """Gauss-Laguerre on the two steepest-descent half-lines from -+1.

    Equals apply_rule(superinterpolation_rule(n_half, omega), f) with the
    default weights; kept as a separate evaluation path so the identity can
    be tested.
    """
    if precision_bits is None:
        precision_bits = default_precision_bits()
    validate_precision(precision_bits)
    if not float(omega) > 0:
        raise ValueError("steepest descent requires omega > 0")
    if not f.entire_strip:
        raise ValueError(
            f"integrand {f.label()} has poles inside the deformation strip"
        )
    if float(omega) <= f.growth_rate:
        raise ValueError(
            f"half-line integrals diverge: omega={omega} within growth rate "
            f"{f.growth_rate} of {f.label()}"
        )
    xi, eta = laguerre_nodes_weights(n_half, precision_bits)
    with workprec(precision_bits + 16):
        w = as_mpf(omega)
        i_unit = mp.mpc(0, 1)
        s_left = mp.mpc(0)
        s_right = mp.mpc(0)
        for x, e in zip(xi, eta):
            t = i_unit * x / w
            s_left += e * f(-1 + t)
            s_right += e * f(1 + t)
        value = i_unit * mp.exp(-i_unit * w) / w * s_left - i_unit * mp.exp(i_unit * w) / w * s_right
        with workprec(precision_bits):
            return +value
