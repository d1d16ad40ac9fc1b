import mpmath
import pytest

from sardquad.integrands import get_integrand

NAMES = ["exp_neg", "sin", "cos", "exp", "poly:0", "poly:1", "poly:3", "poly:6"]


@pytest.mark.parametrize("name", NAMES)
def test_exact_integral(name):
    f = get_integrand(name)
    with mpmath.workdps(30):
        assert abs(mpmath.quad(f.func, [0, 1]) - f.exact()) < 1e-25


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_seminorm_by_quadrature(name, m):
    f = get_integrand(name)
    with mpmath.workdps(40):
        def integrand(x):
            return (mpmath.diff(f.func, x, m) + mpmath.diff(f.func, x, m - 1)) ** 2

        q = mpmath.quad(integrand, [0, 1])
        assert abs(q - f.seminorm_sq(m)) < 1e-20 * max(1, abs(q))


def test_exp_neg_seminorm_zero():
    assert get_integrand("exp_neg").seminorm(3) == 0


@pytest.mark.parametrize("bad", ["tan", "poly:", "poly:x", "poly:-1"])
def test_unknown(bad):
    with pytest.raises((KeyError, ValueError)):
        get_integrand(bad)
