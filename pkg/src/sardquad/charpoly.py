"""Characteristic polynomial P_{2m-2}(lambda) and its roots inside the unit disc."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import mpmath
import numpy as np

from .combinatorics import Polynomial, euler_frobenius
from .kernel import check_order
from .precision import eps

__all__ = [
    "StableRootSet",
    "RootStructureError",
    "char_poly",
    "stable_roots",
    "CLASSIFICATION_TOL",
]

CLASSIFICATION_TOL = 1e-9


class RootStructureError(ArithmeticError):
    """Root count or placement contradicts the theory for this (m, h)."""

    def __init__(self, message: str, roots=(), moduli=()):
        super().__init__(message)
        self.roots = list(roots)
        self.moduli = list(moduli)


@dataclass(frozen=True)
class StableRootSet:
    roots: tuple  # mpmath mpc values
    h: object
    m: int

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def max_modulus(self) -> float:
        return max((float(abs(r)) for r in self.roots), default=0.0)


def _one_minus_lambda(power: int) -> Polynomial:
    return Polynomial((1, -1)) ** power


def char_poly(m: int, h) -> Polynomial:
    """P_{2m-2}(lambda) with mpmath coefficients at the ambient precision.

    (1 - e^{2h})(1-l)^{2m-2} - 2 (l(e^{2h}+1) - e^h(l^2+1))
        * sum_{j=0}^{m-2} h^{2j+1}/(2j+1)! (1-l)^{2m-4-2j} E_{2j}(l)
    """
    m = check_order(m)
    if m < 2:
        raise ValueError("char_poly needs m >= 2; m = 1 has a closed form")
    h = mpmath.mpf(h)
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    eh = mpmath.exp(h)
    e2h = eh * eh
    lead = _one_minus_lambda(2 * m - 2).scale(-mpmath.expm1(2 * h))
    # l(e^{2h}+1) - e^h(l^2+1), ascending
    quad = Polynomial((-eh, e2h + 1, -eh))
    bracket = Polynomial((0,))
    for j in range(m - 1):
        term = _one_minus_lambda(2 * m - 4 - 2 * j) * euler_frobenius(2 * j)
        bracket = bracket + term.scale(h ** (2 * j + 1) / factorial(2 * j + 1))
    p = lead - (quad * bracket).scale(2)
    if p.degree != 2 * m - 2 or abs(p.leading) <= eps() * max(abs(c) for c in p.coeffs):
        raise ArithmeticError(
            f"characteristic polynomial degree collapsed for m={m}, h={h}"
        )
    return p


def _polish(p: Polynomial, dp: Polynomial, z, steps: int = 8):
    tol = eps() * 16
    for _ in range(steps):
        d = dp(z)
        if d == 0:
            break
        step = p(z) / d
        z = z - step
        if abs(step) <= tol * max(1, abs(z)):
            break
    return z


def stable_roots(p: Polynomial, m: int, h=None) -> StableRootSet:
    """Roots of ``p`` strictly inside the unit disc, Newton-polished.

    Initial guesses come from the eigenvalues of the (LAPACK-balanced)
    companion matrix in double precision.
    """
    m = check_order(m)
    if m == 1:
        return StableRootSet((), h, 1)
    if p.degree != 2 * m - 2:
        raise ValueError(f"expected degree {2 * m - 2}, got {p.degree}")
    scale = max(abs(c) for c in p.coeffs)
    cf = np.array([complex(c / scale) for c in reversed(p.coeffs)])
    guesses = np.roots(cf)
    dp = p.derivative()
    polished = [_polish(p, dp, mpmath.mpc(g)) for g in guesses]

    inside, outside = [], []
    for z in polished:
        r = abs(z)
        if abs(1 - r) <= CLASSIFICATION_TOL:
            raise RootStructureError(
                f"root {complex(z)} is within {CLASSIFICATION_TOL} of the unit circle",
                polished,
                [float(abs(w)) for w in polished],
            )
        (inside if r < 1 else outside).append(z)
    if len(inside) != m - 1:
        raise RootStructureError(
            f"expected {m - 1} roots inside the unit disc, found {len(inside)}",
            polished,
            [float(abs(w)) for w in polished],
        )
    return StableRootSet(_pair_conjugates(inside), h, m)


def _pair_conjugates(roots: list) -> tuple:
    tol = mpmath.sqrt(eps())
    real, cplx = [], []
    for z in roots:
        if abs(z.imag) <= tol * max(1, abs(z)):
            real.append(mpmath.mpc(z.real, 0))
        elif z.imag > 0:
            cplx.append(z)
    if len(real) + 2 * len(cplx) != len(roots):
        raise RootStructureError("stable roots are not closed under conjugation", roots)
    out = sorted(real, key=lambda z: z.real)
    for z in sorted(cplx, key=lambda z: (z.real, z.imag)):
        out.extend([z, mpmath.conj(z)])
    return tuple(out)
