"""Discrete analogue D_m(h*beta) of d^2m/dx^2m - d^(2m-2)/dx^(2m-2).

The operator is the grid function whose convolution with G(h*beta) is the
discrete delta.  It is not used to produce coefficients; it exists so the
annihilation identities (e^{+-x}, low-degree monomials, D*G = delta,
D*f_m = h) can be checked independently of the coefficient solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

import mpmath

from .charpoly import StableRootSet, char_poly, stable_roots
from .kernel import _cosh_tail, check_order
from .precision import eps, working_precision

__all__ = [
    "DiscreteOperator",
    "SampledFunction",
    "ConvolutionResult",
    "InsufficientWindowError",
    "build_discrete_operator",
    "default_window",
    "convolve",
    "moment_formula",
]

IMAG_TOL = 1e-12


class InsufficientWindowError(ValueError):
    def __init__(self, message: str, required_window: int):
        super().__init__(message)
        self.required_window = required_window


@dataclass(frozen=True)
class DiscreteOperator:
    m: int
    h: object
    window: int
    values: tuple  # D(h*beta) for beta = -window..window
    amplitudes: tuple  # A_k
    roots: StableRootSet
    leading: object  # p_{2m-2}
    center: object  # C

    def __getitem__(self, beta: int):
        if abs(beta) > self.window:
            return self.tail_value(beta)
        return self.values[beta + self.window]

    def tail_value(self, beta: int):
        b = abs(beta)
        s = mpmath.fsum(a * lam ** (b - 1) for a, lam in zip(self.amplitudes, self.roots))
        return mpmath.re(s / self.leading)

    @property
    def rho(self) -> float:
        return self.roots.max_modulus

    @property
    def tail_scale(self) -> float:
        """sum_k |A_k| / |p|, the envelope constant for |beta| >= 2."""
        return float(sum(abs(a) for a in self.amplitudes) / abs(self.leading))

    def envelope(self, beta: int) -> float:
        return self.tail_scale * self.rho ** (abs(beta) - 1)

    def betas(self) -> range:
        return range(-self.window, self.window + 1)


def default_window(rho: float) -> int:
    """max(50, ceil(ln 1e-14 / ln rho))."""
    if rho <= 0:
        return 50
    return max(50, math.ceil(math.log(1e-14) / math.log(rho)))


def build_discrete_operator(
    m: int, h, window: Optional[int] = None, dps: Optional[int] = None
) -> DiscreteOperator:
    m = check_order(m)
    if m < 2:
        raise ValueError("discrete operator is built for m >= 2 only")
    if window is not None and window < 2:
        raise ValueError("window must be >= 2")
    with working_precision(dps):
        h = mpmath.mpf(h)
        p = char_poly(m, h)
        roots = stable_roots(p, m, h)
        dp = p.derivative()
        lead = p.coeffs[-1]
        sub = p.coeffs[-2]
        scale = max(abs(c) for c in p.coeffs)
        eh = mpmath.exp(h)
        e2h = eh * eh
        amps = []
        for lam in roots:
            d = dp(lam)
            if abs(d) <= 1e-30 * scale:
                raise ArithmeticError(f"P'(lambda) vanishes at {complex(lam)}: repeated root")
            quad = lam * (e2h + 1) - eh * (lam * lam + 1)
            amps.append(2 * (1 - lam) ** (2 * m - 2) * quad * lead / (lam * d))
        if abs(lead) <= eps() * 1e6 * scale:
            raise ArithmeticError(f"leading coefficient {lead} too small relative to P")
        center = 1 + (2 * m - 2) * eh + e2h + eh * sub / lead
        W = default_window(roots.max_modulus) if window is None else int(window)

        def raw(b: int):
            b = abs(b)
            if b >= 2:
                s = mpmath.fsum(a * lam ** (b - 1) for a, lam in zip(amps, roots))
            elif b == 1:
                s = -2 * eh + mpmath.fsum(amps)
            else:
                s = 2 * center + mpmath.fsum(a / lam for a, lam in zip(amps, roots))
            return s / lead

        half = [raw(b) for b in range(W + 1)]
        for b, v in enumerate(half):
            v = mpmath.mpc(v)
            if abs(v.imag) > IMAG_TOL * max(1, abs(v.real)):
                raise ArithmeticError(f"D({b}) has imaginary residue {v.imag}")
        half = [mpmath.re(v) for v in half]
        values = tuple(half[abs(b)] for b in range(-W, W + 1))
    return DiscreteOperator(m, h, W, values, tuple(amps), roots, lead, center)


@dataclass(frozen=True)
class SampledFunction:
    """Grid samples f(h*beta) for beta = start .. start + len(values) - 1."""

    values: Sequence
    start: int

    def covers(self, lo: int, hi: int) -> bool:
        return lo >= self.start and hi <= self.start + len(self.values) - 1

    def __call__(self, beta: int):
        return self.values[beta - self.start]


@dataclass(frozen=True)
class ConvolutionResult:
    betas: tuple
    values: tuple
    bound: float  # max truncation + rounding bound over the requested betas

    def __iter__(self):
        return iter(self.values)


FunctionLike = Union[Callable[[int], object], SampledFunction]


def convolve(
    op: DiscreteOperator,
    f: FunctionLike,
    betas: Iterable[int],
    tol: Optional[float] = None,
    margin: Optional[int] = None,
    dps: Optional[int] = None,
) -> ConvolutionResult:
    """sum_g D(h*beta - h*g) f(h*g), truncated to |beta - g| <= window.

    ``f`` maps an integer grid index to a value.  The returned bound is the
    geometric tail estimate sum_{|d| > W} env(d) |f(beta - d)| (summed
    explicitly over ``margin`` further points) plus a rounding term.
    """
    betas = tuple(betas)
    W = op.window
    rho = op.rho
    if margin is None:
        margin = default_window(rho) if rho > 0 else 10
    if isinstance(f, SampledFunction):
        lo = min(betas) - W
        hi = max(betas) + W
        if not f.covers(lo, hi):
            need = min(min(betas) - f.start, f.start + len(f.values) - 1 - max(betas))
            raise InsufficientWindowError(
                f"samples cover window {max(need, 0)} around the requested betas; "
                f"need {W}",
                W,
            )
    out = []
    worst = 0.0
    with working_precision(dps):
        for beta in betas:
            terms = [op[d] * f(beta - d) for d in range(-W, W + 1)]
            s = mpmath.fsum(terms)
            rounding = float(eps() * mpmath.fsum(abs(t) for t in terms)) * 4 * (2 * W + 1)
            if isinstance(f, SampledFunction):
                tail = op.envelope(W + 1) / (1 - rho) * 2 * max(float(abs(v)) for v in f.values)
            else:
                tail = 0.0
                for d in range(W + 1, W + margin + 1):
                    env = op.envelope(d)
                    tail += env * (float(abs(f(beta - d))) + float(abs(f(beta + d))))
                # geometric remainder beyond the explicit margin, 2x for safety
                tail *= 2.0
            worst = max(worst, tail + rounding)
            out.append(s)
    if tol is not None and worst > tol:
        need = _required_window(op, tol)
        raise InsufficientWindowError(
            f"truncation bound {worst:.3e} exceeds tolerance {tol:.3e}", need
        )
    return ConvolutionResult(betas, tuple(out), worst)


def _required_window(op: DiscreteOperator, tol: float) -> int:
    if op.rho <= 0 or op.tail_scale == 0:
        return op.window
    return max(op.window + 1, math.ceil(1 + math.log(tol / op.tail_scale) / math.log(op.rho)))


def moment_formula(t, m: int):
    """The closed form of f_m evaluated anywhere on the real line."""
    t = mpmath.mpf(t)
    return (_cosh_tail(abs(t), m) + _cosh_tail(abs(1 - t), m)) / 2
