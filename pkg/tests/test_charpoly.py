import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from sardquad.charpoly import RootStructureError, char_poly, stable_roots
from sardquad.combinatorics import Polynomial
from sardquad.precision import auto_dps
from sardquad.solver import _lambda_m2

# frozen stable roots at h = 0.1 (closed form for m = 2, polished roots otherwise)
ROOTS_H01 = {
    2: [-0.267794591733678],
    3: [-0.430460844173003, -0.04307330917552],
    4: [-0.535198954154027, -0.122509570376607, -0.0091453324369405],
    5: [-0.607937629548324, -0.201698592681451, -0.0432088559169611, -0.00212076261943635],
}


@pytest.mark.parametrize("m", sorted(ROOTS_H01))
def test_stable_roots_frozen(m):
    with mpmath.workdps(30):
        h = mpmath.mpf("0.1")
        roots = stable_roots(char_poly(m, h), m, h)
    got = sorted(complex(r).real for r in roots)
    assert got == pytest.approx(sorted(ROOTS_H01[m]), rel=1e-12)


@pytest.mark.parametrize("N", [2, 5, 10, 50, 100])
def test_m2_root_matches_closed_form(N):
    with mpmath.workdps(40):
        h = mpmath.mpf(1) / N
        (lam,) = stable_roots(char_poly(2, h), 2, h)
        assert abs(lam - _lambda_m2(h)) < 1e-30


def test_m2_alternative_discriminant_leaves_disc():
    # the variant with 2h(1 - e^h) under the root gives a value far outside the disc
    with mpmath.workdps(30):
        lam = _lambda_m2(mpmath.mpf("0.1"), discriminant_term="eh")
    assert abs(lam) > 1


@pytest.mark.parametrize("m", [2, 3, 4, 6, 8])
@pytest.mark.parametrize("N", [5, 10, 50, 100, 200])
def test_root_count_residual_and_palindrome(m, N):
    dps = auto_dps(m, N)
    tol = mpmath.mpf(10) ** (30 - dps)
    with mpmath.workdps(dps):
        h = mpmath.mpf(1) / N
        p = char_poly(m, h)
        assert p.degree == 2 * m - 2
        roots = stable_roots(p, m, h)
        assert len(roots) == m - 1
        scale = max(abs(c) for c in p.coeffs)
        for lam in roots:
            assert abs(lam) < 1
            assert abs(p(lam)) <= tol * scale
            # roots come in reciprocal pairs
            assert abs(p(1 / lam)) <= 1e-20 * scale * abs(1 / lam) ** p.degree
        assert roots.max_modulus < 1


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.floats(0.005, 0.5))
def test_roots_real_or_conjugate(m, h):
    with mpmath.workdps(50):
        roots = list(stable_roots(char_poly(m, h), m, h))
    complex_roots = [complex(r) for r in roots if abs(mpmath.im(r)) > 1e-20]
    for z in complex_roots:
        assert any(abs(z.conjugate() - complex(w)) < 1e-12 for w in roots)


def test_m1_has_no_roots():
    assert len(stable_roots(None, 1)) == 0


def test_char_poly_rejects_m1():
    with pytest.raises(ValueError):
        char_poly(1, 0.1)


def test_wrong_root_count_raises():
    # roots 2, 3, -0.5, 4: one inside the disc where m - 1 = 2 are required
    p = Polynomial.from_seq([mpmath.mpf(c) for c in (-12, -11, 21.5, -8.5, 1)])
    with pytest.raises(RootStructureError) as info:
        stable_roots(p, 3)
    assert len(info.value.moduli) == 4
