"""Direct dense solve of the Lagrange (saddle-point) system for the optimal
coefficients at arbitrary fixed nodes.

    sum_g C_g G(x_b - x_g) + sum_a L_a x_b^a + L_{m-1} e^{-x_b} = f_m(x_b)
    sum_g C_g x_g^a = 1/(a+1),      a = 0..m-2
    sum_g C_g e^{-x_g} = 1 - e^{-1}

This path shares only the kernel with the closed-form solver.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath

from .kernel import check_order, green_kernel, rhs_moment
from .precision import auto_dps, condition_limit, working_precision

__all__ = [
    "SaddleSystem",
    "OracleResult",
    "ConditioningWarning",
    "build_saddle_system",
    "solve_full_system",
    "MAX_ORACLE_N",
    "MAX_ORACLE_M",
]

MAX_ORACLE_N = 200
MAX_ORACLE_M = 6
COND_LIMIT = 1e12  # for 16 significant digits; scaled with mp.dps


class ConditioningWarning(RuntimeWarning):
    pass


@dataclass
class SaddleSystem:
    m: int
    nodes: list
    matrix: mpmath.matrix
    rhs: mpmath.matrix

    @property
    def dim(self) -> int:
        return self.matrix.rows


@dataclass
class OracleResult:
    coeffs: list  # mpf
    multipliers: list  # mpf, length m
    condition: float
    residual: float
    warnings: list = field(default_factory=list)

    def __iter__(self):
        # allows ``coeffs, multipliers = solve_full_system(...)``
        return iter((self.coeffs, self.multipliers))


def _validate_nodes(m: int, nodes: Sequence) -> list:
    xs = [mpmath.mpf(x) for x in nodes]
    if len(xs) < m:
        raise ValueError(f"need at least m={m} nodes, got {len(xs)}")
    if any(x < 0 or x > 1 for x in xs):
        raise ValueError("nodes must lie in [0, 1]")
    if len(set(xs)) != len(xs):
        raise ValueError("nodes must be distinct")
    return xs


def build_saddle_system(m: int, nodes: Sequence) -> SaddleSystem:
    m = check_order(m)
    xs = _validate_nodes(m, nodes)
    n = len(xs)
    dim = n + m
    A = mpmath.zeros(dim, dim)
    b = mpmath.zeros(dim, 1)
    # G depends only on |x_b - x_g|; uniform grids reuse most values
    cache: dict = {}
    for i, xi in enumerate(xs):
        for j in range(i, n):
            d = abs(xi - xs[j])
            if d not in cache:
                cache[d] = green_kernel(d, m)
            A[i, j] = A[j, i] = cache[d]
        b[i] = rhs_moment(xi, m)
    for a in range(m - 1):
        for j, xj in enumerate(xs):
            A[j, n + a] = A[n + a, j] = xj**a
        b[n + a] = mpmath.mpf(1) / (a + 1)
    for j, xj in enumerate(xs):
        A[j, n + m - 1] = A[n + m - 1, j] = mpmath.exp(-xj)
    b[n + m - 1] = -mpmath.expm1(-1)
    return SaddleSystem(m, xs, A, b)


def _equilibrate(A: mpmath.matrix, b: mpmath.matrix):
    A = A.copy()
    b = b.copy()
    for i in range(A.rows):
        s = max(abs(A[i, j]) for j in range(A.cols))
        if s == 0:
            raise ZeroDivisionError(f"row {i} of the saddle system is zero")
        for j in range(A.cols):
            A[i, j] /= s
        b[i] /= s
    return A, b


def solve_full_system(m: int, nodes: Sequence, dps: Optional[int] = None) -> OracleResult:
    """Optimal coefficients and Lagrange multipliers at the given nodes.

    Row-equilibrated LU with partial pivoting plus one step of iterative
    refinement, all in mpmath at ``dps`` digits (default scales with m, N).
    A conditioning warning is raised when the estimate exceeds 1e12 scaled
    to the working precision.
    """
    m = check_order(m)
    notes = []
    if len(nodes) - 1 > MAX_ORACLE_N or m > MAX_ORACLE_M:
        notes.append(
            f"outside documented oracle range (N <= {MAX_ORACLE_N}, m <= {MAX_ORACLE_M})"
        )
    with working_precision(dps or auto_dps(m, max(len(nodes) - 1, 1))):
        system = build_saddle_system(m, nodes)
        A, b = _equilibrate(system.matrix, system.rhs)
        try:
            x = mpmath.lu_solve(A, b)
        except ZeroDivisionError as exc:
            raise ArithmeticError("saddle system is singular") from exc
        r = b - A * x
        x = x + mpmath.lu_solve(A, r)
        r = b - A * x
        residual = float(mpmath.norm(r, mpmath.inf) / mpmath.norm(b, mpmath.inf))
        cond = _condition_estimate(A)
        limit = condition_limit(COND_LIMIT)
        if cond > limit:
            notes.append(f"condition estimate {cond:.3e} exceeds {limit:.0e}")
        n = len(system.nodes)
        coeffs = [x[i] for i in range(n)]
        mult = [x[n + i] for i in range(m)]
    for msg in notes:
        warnings.warn(msg, ConditioningWarning, stacklevel=2)
    return OracleResult(coeffs, mult, cond, residual, notes)


def _condition_estimate(A: mpmath.matrix) -> float:
    # Inf-norm condition number, computed in reduced precision; only the
    # order of magnitude is reported.
    with mpmath.workdps(max(20, mpmath.mp.dps // 2)):
        try:
            inv = mpmath.inverse(A)
        except ZeroDivisionError:
            return float("inf")
        return float(mpmath.norm(A, mpmath.inf) * mpmath.norm(inv, mpmath.inf))
