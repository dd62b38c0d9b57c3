"""Orthogonal polynomial tests against the analytic n=1 and n=2 expressions."""
import pytest
from mpmath import mp

from oscgauss.moments import moment_table
from oscgauss.orthopoly import (
    MonicPolynomial,
    NonExistentError,
    norm_sq,
    orthogonal_polynomial,
    pairing,
    poly_eval,
    recurrence_coeffs,
    symmetry_defect,
)

BITS = 256
TOL20 = mp.mpf(10) ** -20


def a0_n1(w):
    """Analytic first-degree coefficient: i/tan(w) - i/w."""
    return mp.mpc(0, 1) / mp.tan(w) - mp.mpc(0, 1) / w


def n2_coeffs(w):
    """Analytic second-degree coefficients."""
    den = -1 + 2 * w**2 + mp.cos(2 * w)
    a0 = (2 + 3 * w**2 - 2 * w**4 + (-2 + w**2) * mp.cos(2 * w) - 4 * w * mp.sin(2 * w)) / (
        w**2 * den
    )
    a1 = -2j * (-2 + 2 * w**2 + 2 * mp.cos(2 * w) + w * mp.sin(2 * w)) / (w * den)
    return a0, a1


def n2_norm(w):
    """Analytic (p_2, p_2)."""
    return -16 * (
        2 * w**3 * mp.cos(w) + w**2 * (-3 + w**2) * mp.sin(w) + mp.sin(w) ** 3
    ) / (w**5 * (-1 + 2 * w**2 + mp.cos(2 * w)))


@pytest.mark.parametrize("omega", [0.5, 1.0, 2.0, 3.0])
def test_n1_closed_form(omega):
    p = orthogonal_polynomial(1, omega, BITS)
    with mp.workprec(BITS + 16):
        assert abs(p.coeffs[0] - a0_n1(mp.mpf(omega))) < TOL20


def test_n1_at_half_pi():
    with mp.workprec(BITS + 16):
        p = orthogonal_polynomial(1, +(mp.pi / 2), BITS)
        assert abs(p.coeffs[0] - (-2j / mp.pi)) < TOL20


@pytest.mark.parametrize("mult", [1, 2])
def test_n1_nonexistent_at_multiples_of_pi(mult):
    with mp.workprec(BITS):
        omega = +(mult * mp.pi)
    with pytest.raises(NonExistentError) as err:
        orthogonal_polynomial(1, omega, BITS)
    assert err.value.degree == 1
    assert err.value.min_pivot < 1e-39


@pytest.mark.parametrize("omega", [0.5, 3.0, 10.0])
def test_n2_closed_forms(omega):
    p = orthogonal_polynomial(2, omega, BITS)
    with mp.workprec(BITS + 16):
        a0, a1 = n2_coeffs(mp.mpf(omega))
        assert abs(p.coeffs[0] - a0) < TOL20
        assert abs(p.coeffs[1] - a1) < TOL20


def test_n2_small_omega_expansions():
    # a_0 = -1/3 - (2/45) w^2 + O(w^4), a_1 = -(4i/15) w + O(w^3)
    w = 0.1
    p = orthogonal_polynomial(2, w, BITS)
    with mp.workprec(BITS):
        assert abs(p.coeffs[0] - (mp.mpf(-1) / 3 - mp.mpf(2) / 45 * w * w)) < 1e-4
        assert abs(p.coeffs[1] - mp.mpc(0, -4) / 15 * w) < 1e-3
    p = orthogonal_polynomial(2, 1e-8, BITS)
    with mp.workprec(BITS):
        assert abs(p.coeffs[0] + mp.mpf(1) / 3) < 1e-15
        assert abs(p.coeffs[1]) < 1e-7


def test_legendre_limit_coefficients_at_zero():
    p = orthogonal_polynomial(4, 0.0, BITS)
    with mp.workprec(BITS):
        # monic Legendre P4: x^4 - 6/7 x^2 + 3/35
        assert abs(p.coeffs[0] - mp.mpf(3) / 35) < mp.mpf(10) ** -70
        assert abs(p.coeffs[1]) < mp.mpf(10) ** -70
        assert abs(p.coeffs[2] + mp.mpf(6) / 7) < mp.mpf(10) ** -70
        assert abs(p.coeffs[3]) < mp.mpf(10) ** -70


def test_pairing_examples():
    t = moment_table(2.0, 2, BITS)
    with mp.workprec(BITS + 16):
        assert abs(pairing([1], [1], t) - mp.sin(2)) < TOL20
        mu1 = mp.mpc(0, 2) * (mp.sin(2) - 2 * mp.cos(2)) / 4
        assert abs(pairing([0, 1], [1], t) - mu1) < TOL20
    p1 = orthogonal_polynomial(1, 2.0, BITS)
    t3 = moment_table(2.0, 1, BITS)
    with mp.workprec(BITS):
        assert abs(pairing(p1, [1], t3)) < mp.mpf(10) ** -70


def test_pairing_rejects_short_table():
    t = moment_table(2.0, 1, BITS)
    with pytest.raises(ValueError):
        pairing([0, 0, 1], [1], t)


def test_norm_sq_examples():
    with mp.workprec(BITS + 16):
        # near the Legendre limit: integral of (x^2 - 1/3)^2 = 8/45
        assert abs(norm_sq(2, 1e-6, BITS) - mp.mpf(8) / 45) < 1e-10
        # closed form at omega = 3
        assert abs(norm_sq(2, 3.0, BITS) - n2_norm(mp.mpf(3))) < TOL20
        # small magnitude near the first breakdown
        assert abs(norm_sq(2, 5.92966, BITS)) < 1e-4


def test_recurrence_coeffs_alpha0():
    with mp.workprec(BITS + 16):
        rc = recurrence_coeffs(0, +(mp.pi / 2), BITS)
        assert rc.defined_up_to == 0
        assert abs(rc.alpha[0] - 2j / mp.pi) < TOL20


def test_recurrence_coeffs_legendre_limit():
    rc = recurrence_coeffs(3, 1e-7, BITS)
    with mp.workprec(BITS):
        assert rc.defined_up_to == 3
        expected = [mp.mpf(k * k) / (4 * k * k - 1) for k in (1, 2, 3)]
        for b, e in zip(rc.beta, expected):
            assert abs(b - e) < 1e-10
        for a in rc.alpha:
            assert abs(a) < 1e-5


def test_recurrence_coeffs_terminate_at_breakdown():
    from oscgauss.analysis import breakdown_scan

    records, _ = breakdown_scan(2, (5.8, 6.0), 0.01, BITS)
    assert len(records) == 1
    star = records[0].omega_star
    rc = recurrence_coeffs(3, star, BITS)
    # (p_2, p_2) = 0 at the refined frequency: alpha_2 does not exist
    assert rc.defined_up_to == 1
    assert len(rc.alpha) == 2 and len(rc.beta) == 1


def test_poly_eval_examples():
    with mp.workprec(BITS + 16):
        p1 = orthogonal_polynomial(1, +(mp.pi / 2), BITS)
        assert abs(poly_eval(p1, 2j / mp.pi)) < TOL20
        p2 = orthogonal_polynomial(2, 1e-8, BITS)
        assert abs(poly_eval(p2, 1 / mp.sqrt(3))) < 1e-7
        # monic leading behavior at |z| = 1e6
        z = mp.mpc(10) ** 6
        assert abs(poly_eval(p2, z) / z**2 - 1) < 1e-5


def test_symmetry_defect_examples():
    with mp.workprec(BITS):
        p1 = orthogonal_polynomial(1, +(mp.pi / 2), BITS)
        assert symmetry_defect(p1) < mp.mpf(10) ** -70
        p2 = orthogonal_polynomial(2, 3.0, BITS)
        assert symmetry_defect(p2) < mp.mpf(10) ** (-p2.certified_digits)
        fake = MonicPolynomial(
            degree=2,
            coeffs=(mp.mpc(0, 1), mp.mpc(0)),
            omega=mp.mpf(1),
            precision_bits=BITS,
            condition_estimate=1.0,
            certified_digits=70,
        )
        assert symmetry_defect(fake) == 1


@pytest.mark.parametrize("omega", [0.5, 3.0, 10.0, 40.0, 100.0])
@pytest.mark.parametrize("n", [1, 2, 5, 8, 16])
def test_orthogonality_residual_invariant(n, omega):
    p = orthogonal_polynomial(n, omega, BITS)
    table = moment_table(omega, 2 * n - 1, 2 * BITS)
    with mp.workprec(2 * BITS):
        cut = mp.mpf(10) ** (-p.certified_digits)
        for j in range(n):
            mono = [mp.mpc(0)] * j + [mp.mpc(1)]
            assert abs(pairing(p, mono, table)) <= cut
        assert p.certified_digits >= 38
        assert symmetry_defect(p) <= cut


def test_nonexistence_propagation_at_breakdown():
    """At a vanishing (p_2,p_2), degree 3 fails and p_2 satisfies degree-3 conditions."""
    from oscgauss.analysis import breakdown_scan

    records, _ = breakdown_scan(2, (5.8, 6.0), 0.01, BITS)
    star = records[0].omega_star
    with pytest.raises(NonExistentError):
        orthogonal_polynomial(3, star, BITS)
    p2 = orthogonal_polynomial(2, star, BITS)
    table = moment_table(star, 4, BITS)
    with mp.workprec(BITS):
        for k in range(3):
            mono = [mp.mpc(0)] * k + [mp.mpc(1)]
            assert abs(pairing(p2, mono, table)) < 1e-10


def test_condition_estimate_and_json():
    p = orthogonal_polynomial(4, 7.0, BITS)
    assert p.condition_estimate >= 1.0
    d = p.to_json_dict()
    assert set(d) == {"n", "omega", "precision_bits", "coeffs", "condition_estimate"}
    assert len(d["coeffs"]) == 4


def test_rejects_degree_zero():
    with pytest.raises(ValueError):
        orthogonal_polynomial(0, 1.0, BITS)
