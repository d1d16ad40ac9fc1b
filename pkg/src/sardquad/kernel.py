"""Fundamental solution of d^2m/dx^2m - d^(2m-2)/dx^(2m-2) and the moment
function f_m(t) = int_0^1 G(x - t) dx.

Both are defined as sinh/cosh minus a truncated Taylor polynomial.  For the
arguments that matter here (|x| <= 1) we sum the Taylor *tail* instead,
which carries no cancellation: the value of G near zero is ~x^(2m-1)/(2m-1)!
and would otherwise be lost under the rounding of sinh(x).
"""

from __future__ import annotations

from math import factorial

import mpmath

from .precision import eps

__all__ = ["check_order", "green_kernel", "rhs_moment", "kernel_constant"]

_TAIL_LIMIT = 4


def check_order(m: int) -> int:
    if int(m) != m or m < 1:
        raise ValueError(f"space order m must be a positive integer, got {m!r}")
    return int(m)


def _taylor_tail(x, start: int):
    """sum_{j = start, start+2, ...} x^j / j!  for x >= 0."""
    term = x**start / factorial(start)
    total = term
    j = start
    tol = eps()
    while True:
        term = term * x * x / ((j + 1) * (j + 2))
        j += 2
        total += term
        if abs(term) <= tol * abs(total) or term == 0:
            return total


def _sinh_tail(x, m: int):
    # sinh(x) - sum_{k=1}^{m-1} x^(2k-1)/(2k-1)!
    if x == 0:
        return mpmath.mpf(0)
    if x <= _TAIL_LIMIT:
        return _taylor_tail(x, 2 * m - 1)
    s = mpmath.sinh(x)
    for k in range(1, m):
        s -= x ** (2 * k - 1) / factorial(2 * k - 1)
    return s


def _cosh_tail(x, m: int):
    # cosh(x) - sum_{k=0}^{m-1} x^(2k)/(2k)!
    if x == 0:
        return mpmath.mpf(0)
    if x <= _TAIL_LIMIT:
        return _taylor_tail(x, 2 * m)
    s = mpmath.cosh(x)
    for k in range(0, m):
        s -= x ** (2 * k) / factorial(2 * k)
    return s


def green_kernel(x, m: int):
    """G(x) = sign(x)/2 * (sinh x - sum_{k=1}^{m-1} x^(2k-1)/(2k-1)!).

    Returned as an mpmath number at the ambient precision.
    """
    m = check_order(m)
    ax = abs(mpmath.mpf(x))
    return _sinh_tail(ax, m) / 2


def rhs_moment(t, m: int):
    """f_m(t) = int_0^1 G(x - t) dx for t in [0, 1]."""
    m = check_order(m)
    t = mpmath.mpf(t)
    if t < 0 or t > 1:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return (_cosh_tail(t, m) + _cosh_tail(1 - t, m)) / 2


def kernel_constant(m: int):
    """int_0^1 int_0^1 G(x - y) dx dy.

    Equal to (e^2 - 2e - 1)/(2e) - sum_{k=1}^{m-1} 1/(2k+1)!; summed here as
    the tail sum_{k>=m} 1/(2k+1)!.
    """
    m = check_order(m)
    return _taylor_tail(mpmath.mpf(1), 2 * m + 1)
