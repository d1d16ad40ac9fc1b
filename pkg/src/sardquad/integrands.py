"""Built-in test integrands with exact integrals and exact seminorms.

The seminorm of phi in W_2^(m,m-1)(0,1) is

    |phi|^2 = int_0^1 (phi^(m)(x) + phi^(m-1)(x))^2 dx.

Derivations of the stored closed forms:

* ``exp_neg`` (e^{-x}): phi^(m) = -phi^(m-1), so the seminorm is 0.
* ``exp`` (e^x): phi^(m) + phi^(m-1) = 2 e^x, giving 2 (e^2 - 1).
* ``sin``: sin^(k)(x) = sin(x + k pi/2), so the sum is
  sqrt(2) sin(x + t) with t = (2m - 1) pi/4, and
  int_0^1 2 sin^2(x + t) dx = 1 - (sin(2 + 2t) - sin(2t)) / 2.
* ``cos``: cos x = sin(x + pi/2); same formula with t = (2m + 1) pi/4.
* ``poly:k`` (x^k): with a = k!/(k-m)!, b = k!/(k-m+1)! (zero when the
  power goes negative) and p = k - m, the integrand is
  (a x^p + b x^(p+1))^2, so the seminorm squared is
  a^2/(2p+1) + ab/(p+1) + b^2/(2p+3), evaluated as a Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable

import mpmath

__all__ = ["Integrand", "get_integrand", "BUILTIN_NAMES"]

BUILTIN_NAMES = ("exp_neg", "sin", "cos", "exp", "poly:k")


@dataclass(frozen=True)
class Integrand:
    name: str
    func: Callable  # mp -> mp
    exact: Callable[[], object]
    seminorm_sq: Callable[[int], object]

    def seminorm(self, m: int):
        return mpmath.sqrt(self.seminorm_sq(m))


def _trig_seminorm_sq(theta):
    return 1 - (mpmath.sin(2 + 2 * theta) - mpmath.sin(2 * theta)) / 2


def _poly_seminorm_sq(k: int, m: int) -> Fraction:
    def falling(n: int, r: int) -> int:
        # n!/(n-r)!, zero when r > n
        return factorial(n) // factorial(n - r) if r <= n else 0

    a = falling(k, m)
    b = falling(k, m - 1)
    p = k - m
    total = Fraction(0)
    if a:
        total += Fraction(a * a, 2 * p + 1) + Fraction(a * b, p + 1)
    if b:
        total += Fraction(b * b, 2 * p + 3)
    return total


def _fraction_to_mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def get_integrand(name: str) -> Integrand:
    """Look up ``exp_neg``, ``sin``, ``cos``, ``exp`` or ``poly:<k>``."""
    if name == "exp_neg":
        return Integrand(name, lambda x: mpmath.exp(-x), lambda: -mpmath.expm1(-1), lambda m: mpmath.mpf(0))
    if name == "exp":
        return Integrand(
            name, mpmath.exp, lambda: mpmath.e - 1, lambda m: 2 * mpmath.expm1(2)
        )
    if name == "sin":
        return Integrand(
            name,
            mpmath.sin,
            lambda: 1 - mpmath.cos(1),
            lambda m: _trig_seminorm_sq((2 * m - 1) * mpmath.pi / 4),
        )
    if name == "cos":
        return Integrand(
            name,
            mpmath.cos,
            lambda: mpmath.sin(1),
            lambda m: _trig_seminorm_sq((2 * m + 1) * mpmath.pi / 4),
        )
    if name.startswith("poly:"):
        try:
            k = int(name[5:])
        except ValueError:
            raise ValueError(f"bad polynomial degree in {name!r}") from None
        if k < 0:
            raise ValueError("polynomial degree must be >= 0")
        return Integrand(
            name,
            lambda x, k=k: x**k,
            lambda k=k: mpmath.mpf(1) / (k + 1),
            lambda m, k=k: _fraction_to_mp(_poly_seminorm_sq(k, m)),
        )
    raise KeyError(f"unknown integrand {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
