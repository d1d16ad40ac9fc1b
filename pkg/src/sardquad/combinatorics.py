"""Exact integer/rational building blocks: Bernoulli numbers, forward
differences of powers at zero, and Euler-Frobenius polynomials.

Bernoulli numbers follow the B_1 = -1/2 convention, which is the one under
which the power-sum identity

    sum_{g=0}^{b-1} g^k = sum_{j=1}^{k+1} k! B_{k+1-j} / (j! (k+1-j)!) b^j

holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Any, Sequence

__all__ = [
    "CapacityError",
    "Polynomial",
    "bernoulli",
    "forward_diff_zero",
    "euler_frobenius",
    "power_sum",
    "MAX_BERNOULLI",
    "MAX_EULER_FROBENIUS_DEGREE",
]

# Supported range for orders m <= 10.
MAX_BERNOULLI = 18
MAX_EULER_FROBENIUS_DEGREE = 16


class CapacityError(ValueError):
    """Requested index is beyond the supported exact range."""


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial, ``coeffs[s]`` is the coefficient of ``x**s``.

    Coefficients may be ints, Fractions, floats or mpmath numbers; the class
    only needs ``+``, ``*`` and comparison with zero.
    """

    coeffs: tuple[Any, ...]

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0]
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_seq(cls, coeffs: Sequence[Any]) -> "Polynomial":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Any:
        return self.coeffs[-1]

    def __call__(self, x: Any) -> Any:
        acc = self.coeffs[-1] * 1
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out: list[Any] = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(tuple(out))

    def scale(self, s: Any) -> "Polynomial":
        return Polynomial(tuple(s * c for c in self.coeffs))

    def __pow__(self, n: int) -> "Polynomial":
        result = Polynomial((1,))
        for _ in range(n):
            result = result * self
        return result

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0,))
        return Polynomial(tuple(s * c for s, c in enumerate(self.coeffs) if s > 0))

    def map(self, fn) -> "Polynomial":
        return Polynomial(tuple(fn(c) for c in self.coeffs))


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    table = [Fraction(1)]
    for k in range(1, n + 1):
        # sum_{j=0}^{k} C(k+1, j) B_j = 0
        s = sum(Fraction(comb(k + 1, j)) * table[j] for j in range(k))
        table.append(-s / (k + 1))
    return tuple(table)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n as an exact Fraction (B_1 = -1/2)."""
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    if n > MAX_BERNOULLI:
        raise CapacityError(f"B_{n} exceeds supported range (n <= {MAX_BERNOULLI})")
    return _bernoulli_table(MAX_BERNOULLI)[n]


def forward_diff_zero(i: int, k: int) -> int:
    """``Delta^i 0^k = sum_{l=1}^{i} (-1)^(i-l) C(i,l) l^k``.

    The l = 0 term is dropped, so ``forward_diff_zero(0, 0) == 0``.
    """
    if i < 0 or k < 0:
        raise ValueError("i and k must be nonnegative")
    return sum((-1) ** (i - l) * comb(i, l) * l**k for l in range(1, i + 1))


@lru_cache(maxsize=None)
def _euler_frobenius(k: int) -> tuple[int, ...]:
    n = 2 * k
    return tuple(
        sum((-1) ** j * comb(n + 2, j) * (s + 1 - j) ** (n + 1) for j in range(s + 1))
        for s in range(n + 1)
    )


def euler_frobenius(degree: int) -> Polynomial:
    """Euler-Frobenius polynomial E_degree for even degree.

    >>> euler_frobenius(2).coeffs
    (1, 4, 1)
    """
    if degree < 0 or degree % 2:
        raise ValueError(f"Euler-Frobenius degree must be even and >= 0, got {degree}")
    if degree > MAX_EULER_FROBENIUS_DEGREE:
        raise CapacityError(
            f"E_{degree} exceeds supported degree {MAX_EULER_FROBENIUS_DEGREE}"
        )
    return Polynomial(_euler_frobenius(degree // 2))


def power_sum(k: int, n: int) -> Fraction:
    """``sum_{g=0}^{n-1} g^k`` through the Bernoulli-number expression."""
    return sum(
        (
            Fraction(factorial(k), factorial(j) * factorial(k + 1 - j))
            * bernoulli(k + 1 - j)
            * n**j
            for j in range(1, k + 2)
        ),
        Fraction(0),
    )
