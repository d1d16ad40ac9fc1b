import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sardquad.charpoly import char_poly, stable_roots
from sardquad.precision import auto_dps, working_precision
from sardquad.solver import (
    ODD_RHS_VARIANT,
    PrecisionError,
    _guard,
    _general_coefficients,
    ab_solution,
    assemble_system,
    closed_form_m1,
    closed_form_m2,
    coefficients,
    specialised_system,
    integrate,
    oracle_rule,
    solve_ab,
)

# first three and middle coefficient for N = 10, frozen from a run at 50+ digits
FROZEN_N10 = {
    2: ([0.03912291743971235, 0.11379015852315796, 0.09630587673277446], 0.10013786126304852),
    3: ([0.035398378940875906, 0.12369705162356621, 0.0868237572962886], 0.10206956441730002),
    4: ([0.033038014919902894, 0.13280597555524012, 0.07253058476696733], 0.11014777833093373),
}


@pytest.mark.parametrize("m", sorted(FROZEN_N10))
def test_frozen_coefficients(m):
    rule = coefficients(m, 10)
    head, mid = FROZEN_N10[m]
    np.testing.assert_allclose(rule.coeffs[:3], head, rtol=1e-14)
    assert rule.coeffs[5] == pytest.approx(mid, rel=1e-14)


def test_m1_single_interval():
    rule = closed_form_m1(1)
    e = math.e
    np.testing.assert_allclose(rule.coeffs, [(e - 1) / (e + 1)] * 2, rtol=1e-15)


@pytest.mark.parametrize("N", [1, 2, 10, 100])
def test_m1_shape(N):
    rule = closed_form_m1(N)
    h = 1 / N
    edge = math.expm1(h) / (math.expm1(h) + 2)
    assert rule.coeffs[0] == pytest.approx(edge, rel=1e-15)
    assert rule.coeffs[-1] == pytest.approx(edge, rel=1e-15)
    if N > 1:
        np.testing.assert_allclose(rule.coeffs[1:-1], 2 * edge, rtol=1e-15)


@pytest.mark.parametrize("N", [2, 3, 10, 50, 100])
def test_m2_closed_form_matches_general_route(N):
    a = coefficients(2, N, method="closed_form_m2")
    b = coefficients(2, N, method="theorem_4_6")
    diff = max(abs(x - y) for x, y in zip(a.high_precision_coeffs, b.high_precision_coeffs))
    assert diff <= 1e-11


GRID = [(m, N) for m in (1, 2, 3, 4, 5) for N in (5, 10, 20, 50, 100) if N >= m]


@pytest.mark.parametrize("m, N", GRID)
def test_exactness(m, N):
    rule = coefficients(m, N)
    with working_precision(auto_dps(m, N)):
        xs = rule.high_precision_nodes()
        err = integrate(rule, [mpmath.exp(-x) for x in xs]) + mpmath.expm1(-1)
        assert abs(err) <= 1e-12
        for a in range(m - 1):
            assert abs(integrate(rule, [x**a for x in xs]) - mpmath.mpf(1) / (a + 1)) <= 1e-11
    # the float64 weights alone keep both properties too
    x = rule.nodes
    assert abs(math.fsum(rule.coeffs * np.exp(-x)) + math.expm1(-1)) <= 1e-12
    for a in range(m - 1):
        assert abs(math.fsum(rule.coeffs * x**a) - 1 / (a + 1)) <= 1e-11


@pytest.mark.parametrize("m", [2, 3, 4])
def test_interior_tends_to_h(m):
    N = 100
    rule = coefficients(m, N)
    dev = np.abs(rule.coeffs - 1 / N)
    # boundary layer decays geometrically toward the middle
    assert dev[N // 2] < 1e-15
    assert dev[1] > dev[5] > dev[10]


@pytest.mark.parametrize("m, N", [(3, 5), (3, 10), (3, 20), (4, 5), (4, 10), (4, 20)])
def test_odd_rhs_variant(m, N):
    # the selected variant reproduces the dense solve; the alternative does not
    oracle = oracle_rule(m, N).high_precision_coeffs
    with working_precision(auto_dps(m, N)):
        chosen, _ = _general_coefficients(m, N, ODD_RHS_VARIANT)
        other, _ = _general_coefficients(m, N, "h_odd")
        assert max(abs(x - y) for x, y in zip(chosen, oracle)) <= 1e-8
        assert max(abs(x - y) for x, y in zip(other, oracle)) > 1e-6
    assert ODD_RHS_VARIANT == "h_even"


@pytest.mark.parametrize("m", [3, 4])
@pytest.mark.parametrize("N", [5, 10, 50, 100])
def test_specialised_system_matches_general(m, N):
    with working_precision(auto_dps(m, N)):
        h = mpmath.mpf(1) / N
        roots = stable_roots(char_poly(m, h), m, h)
        general = solve_ab(assemble_system(m, N, roots), roots)
        special = solve_ab(specialised_system(m, N, roots), roots)
        for x, y in zip(general.a + general.b, special.a + special.b):
            assert abs(x - y) <= 1e-11 * max(1, abs(x))


@pytest.mark.parametrize("m, N", [(2, 10), (5, 50), (6, 100), (8, 200), (10, 200)])
def test_ab_solution_well_posed(m, N):
    sol = ab_solution(m, N)
    assert len(sol.a) == len(sol.b) == m - 1
    assert sol.residual < 1e-30
    assert all(abs(mpmath.im(v)) < 1e-20 for v in sol.a + sol.b)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(5, 60))
def test_coefficients_sum_to_one(m, N):
    rule = coefficients(m, N)
    assert abs(mpmath.fsum(rule.high_precision_coeffs) - 1) < 1e-20
    assert np.all(np.isfinite(rule.coeffs))


def test_rule_fields():
    rule = coefficients(3, 20)
    assert rule.method == "theorem_4_6"
    assert rule.h == 1 / 20
    assert len(rule.nodes) == len(rule.coeffs) == 21
    assert rule.nodes[0] == 0 and rule.nodes[-1] == 1


@pytest.mark.parametrize(
    "m, N, method",
    [(5, 3, None), (3, 2, None), (1, 0, None), (2, 1, None), (1, 5, "closed_form_m2"),
     (3, 5, "closed_form_m1"), (3, 5, "simpson"), (1, 5, "theorem_4_6")],
)
def test_invalid_requests(m, N, method):
    with pytest.raises(ValueError):
        coefficients(m, N, method=method)


def test_guard_rejects_tiny_denominator():
    with pytest.raises(PrecisionError):
        _guard(mpmath.mpf(1e-20), "test")


def test_integrate_sample_count():
    rule = coefficients(2, 10)
    with pytest.raises(ValueError):
        integrate(rule, [1.0] * 10)
    assert integrate(rule, [1.0] * 11) == pytest.approx(1, abs=1e-15)
