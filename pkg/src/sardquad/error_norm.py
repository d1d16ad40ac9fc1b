"""Norm of the error functional of a quadrature rule and the resulting
Cauchy-Schwarz bound |R(phi)| <= ||phi|| * ||l||.

    ||l||^2 = (-1)^m [ sum_b sum_g C_b C_g G(x_b - x_g)
                       - 2 sum_b C_b f_m(x_b) + (e^2 - 2e - 1)/(2e)
                       - sum_{k=1}^{m-1} 1/(2k+1)! ]
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath

from .kernel import green_kernel, kernel_constant, rhs_moment
from .precision import auto_dps, working_precision
from .solver import QuadratureRule

__all__ = ["ErrorReport", "InconsistencyError", "norm_squared", "error_bound", "norm_squared_at"]


class InconsistencyError(ArithmeticError):
    """A computed squared norm came out nonpositive."""


@dataclass(frozen=True)
class ErrorReport:
    norm_sq: float
    norm: float
    m: int
    N: int
    bound_factor: Optional[float] = None


def norm_squared_at(m: int, nodes, coeffs):
    """Squared error-functional norm (mpmath value) for arbitrary nodes."""
    xs = [mpmath.mpf(x) for x in nodes]
    cs = [mpmath.mpf(c) for c in coeffs]
    n = len(xs)
    double = mpmath.fsum(
        cs[i] * mpmath.fsum(cs[j] * green_kernel(xs[i] - xs[j], m) for j in range(n))
        for i in range(n)
    )
    single = mpmath.fsum(c * rhs_moment(x, m) for c, x in zip(cs, xs))
    return (-1) ** m * (double - 2 * single + kernel_constant(m))


def _uniform_norm_squared(m: int, N: int, coeffs):
    h = mpmath.mpf(1) / N
    g = [green_kernel(h * d, m) for d in range(N + 1)]
    double = mpmath.fsum(
        coeffs[i] * mpmath.fsum(coeffs[j] * g[abs(i - j)] for j in range(N + 1)) for i in range(N + 1)
    )
    single = mpmath.fsum(coeffs[b] * rhs_moment(h * b, m) for b in range(N + 1))
    return (-1) ** m * (double - 2 * single + kernel_constant(m))


def norm_squared(rule: QuadratureRule, dps: Optional[int] = None) -> ErrorReport:
    """Evaluate ||l||^2 for ``rule`` at raised precision.

    Rules built in this package carry full-precision coefficients.  A rule
    holding only float64 weights (e.g. read back from JSON) is evaluated as
    given; for large m and N its norm is then dominated by the rounding of
    the weights and may come out nonpositive.
    """
    with working_precision(dps or auto_dps(rule.m, rule.N)):
        coeffs = [mpmath.mpf(c) for c in rule.high_precision_coeffs]
        value = _uniform_norm_squared(rule.m, rule.N, coeffs)
        if value <= 0:
            raise InconsistencyError(
                f"squared norm {mpmath.nstr(value, 5)} is not positive "
                f"(m={rule.m}, N={rule.N}, method={rule.method})"
            )
        return ErrorReport(float(value), float(mpmath.sqrt(value)), rule.m, rule.N)


def error_bound(report: ErrorReport, seminorm: float) -> float:
    """seminorm * ||l||, the Cauchy-Schwarz bound on |R(phi)|."""
    if seminorm < 0:
        raise ValueError(f"seminorm must be nonnegative, got {seminorm}")
    return float(seminorm) * report.norm
