"""Property tests for invariants that hold across the whole input range."""

import mpmath
from hypothesis import given, settings, strategies as st

from sardquad.error_norm import error_bound, norm_squared
from sardquad.integrands import get_integrand
from sardquad.kernel import green_kernel
from sardquad.oracle import solve_full_system
from sardquad.precision import auto_dps, working_precision
from sardquad.solver import coefficients, integrate

orders = st.integers(1, 5)


@st.composite
def order_and_size(draw):
    m = draw(orders)
    return m, draw(st.integers(max(m, 2), 80))


@settings(max_examples=30, deadline=None)
@given(order_and_size(), st.sampled_from(["sin", "cos", "exp", "exp_neg", "poly:2", "poly:5"]))
def test_bound_validity(mn, name):
    m, N = mn
    rule = coefficients(m, N)
    f = get_integrand(name)
    report = norm_squared(rule)
    with working_precision(auto_dps(m, N)):
        err = abs(integrate(rule, [f.func(x) for x in rule.high_precision_nodes()]) - f.exact())
        bound = error_bound(report, float(f.seminorm(m)))
        assert err <= bound * (1 + 1e-12) + mpmath.mpf(10) ** -30


@settings(max_examples=20, deadline=None)
@given(order_and_size())
def test_exactness_invariants(mn):
    m, N = mn
    rule = coefficients(m, N)
    with working_precision(auto_dps(m, N)):
        xs = rule.high_precision_nodes()
        assert abs(integrate(rule, [mpmath.exp(-x) for x in xs]) + mpmath.expm1(-1)) <= 1e-12
        for a in range(m - 1):
            assert abs(integrate(rule, [x**a for x in xs]) - mpmath.mpf(1) / (a + 1)) <= 1e-11


@settings(max_examples=20, deadline=None)
@given(order_and_size())
def test_norm_positive_and_monotone_in_n(mn):
    m, N = mn
    a = norm_squared(coefficients(m, N)).norm
    b = norm_squared(coefficients(m, 2 * N)).norm
    assert 0 < b < a


@settings(max_examples=15, deadline=None)
@given(
    st.integers(1, 3),
    st.lists(st.integers(0, 1000), min_size=6, max_size=10, unique=True),
    st.randoms(use_true_random=False),
)
def test_oracle_permutation_invariance(m, ticks, rnd):
    nodes = [mpmath.mpf(t) / 1000 for t in ticks]
    perm = list(range(len(nodes)))
    rnd.shuffle(perm)
    with working_precision(50):
        base = solve_full_system(m, nodes).coeffs
        shuffled = solve_full_system(m, [nodes[i] for i in perm]).coeffs
        for k, i in enumerate(perm):
            assert abs(shuffled[k] - base[i]) <= 1e-25 * max(1, abs(base[i]))


@given(st.floats(-8, 8, allow_nan=False), st.integers(1, 6))
def test_kernel_nonnegative_growth(x, m):
    # every series term has the sign of |x|, so G >= 0
    with working_precision(30):
        assert green_kernel(x, m) >= 0
