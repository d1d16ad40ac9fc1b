"""Optimal coefficients for equally spaced nodes x_b = b/N.

Interior coefficients have the form

    C_b = h + sum_k (a_k lam_k^b + b_k lam_k^(N-b)),   b = 1..N-1,

where lam_k are the stable roots of P_{2m-2}.  The 2m-2 unknowns (a_k, b_k)
solve a small linear system whose rows come in four families: two
exponential-matching rows, an even family, an odd family with Bernoulli
right-hand sides, and a moment family.  The endpoint weights C_0 and C_N
follow from the exactness conditions for 1 and e^{-x}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Optional, Sequence

import mpmath
import numpy as np

from .charpoly import StableRootSet, char_poly, stable_roots
from .combinatorics import bernoulli, forward_diff_zero
from .kernel import check_order
from .precision import auto_dps, condition_limit, working_precision

__all__ = [
    "QuadratureRule",
    "ABSolution",
    "METHODS",
    "PrecisionError",
    "closed_form_m1",
    "closed_form_m2",
    "assemble_system",
    "specialised_system",
    "solve_ab",
    "coefficients",
    "oracle_rule",
    "integrate",
]

METHODS = ("closed_form_m1", "closed_form_m2", "theorem_4_6", "oracle")

IMAG_TOL = 1e-10
DENOM_TOL = 1e-14
COND_LIMIT = 1e12  # for 16 significant digits; scaled with mp.dps

# Odd-family right-hand side: sum_{l<=j} h^{2l} B_{2l}/(2l)! ("h_even") or
# the same sum with h^{2l-1} ("h_odd"), which is what the specialised m=3/m=4
# systems look like when their rows are read without the leading h factor.
# Both are kept; the dense oracle selects "h_even"
# (see tests/test_solver.py::test_odd_rhs_variant).
_ODD_RHS_VARIANTS = ("h_even", "h_odd")
ODD_RHS_VARIANT = "h_even"


class PrecisionError(ArithmeticError):
    pass


def _q(x):
    """Fraction -> mpf at the ambient precision."""
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class QuadratureRule:
    m: int
    N: int
    h: float
    nodes: np.ndarray
    coeffs: np.ndarray
    method: str
    exact: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if len(self.nodes) != self.N + 1 or len(self.coeffs) != self.N + 1:
            raise ValueError("nodes and coeffs must have length N + 1")

    @property
    def high_precision_coeffs(self) -> tuple:
        """Coefficients as mpmath numbers (full precision when available)."""
        if self.exact:
            return self.exact
        return tuple(mpmath.mpf(float(c)) for c in self.coeffs)

    def high_precision_nodes(self) -> tuple:
        return tuple(mpmath.mpf(b) / self.N for b in range(self.N + 1))


@dataclass(frozen=True)
class ABSolution:
    a: tuple
    b: tuple
    roots: StableRootSet
    residual: float = 0.0
    condition: float = 0.0


def _make_rule(m: int, N: int, coeffs: Sequence, method: str) -> QuadratureRule:
    exact = tuple(+c for c in coeffs)
    nodes = np.arange(N + 1, dtype=float) / N
    return QuadratureRule(
        m=m,
        N=N,
        h=1.0 / N,
        nodes=nodes,
        coeffs=np.array([float(c) for c in exact]),
        method=method,
        exact=exact,
    )


def _check_n(N: int, minimum: int) -> int:
    if int(N) != N or N < minimum:
        raise ValueError(f"N must be an integer >= {minimum}, got {N!r}")
    return int(N)


def closed_form_m1(N: int, dps: Optional[int] = None) -> QuadratureRule:
    """m = 1: C_0 = C_N = (e^h - 1)/(e^h + 1), interior twice that."""
    N = _check_n(N, 1)
    with working_precision(dps):
        h = mpmath.mpf(1) / N
        em1 = mpmath.expm1(h)
        edge = em1 / (em1 + 2)
        coeffs = [edge] + [2 * edge] * (N - 1) + [edge] if N > 1 else [edge, edge]
        return _make_rule(1, N, coeffs, "closed_form_m1")


def _lambda_m2(h, discriminant_term: str = "e2h"):
    """Stable root of the m = 2 quadratic.

    The quadratic is palindromic; its discriminant reduces to
    (e^h - 1)^2 (h^2 (e^h+1)^2 + 2h(1 - e^{2h})).  ``discriminant_term="eh"``
    reproduces the variant with 2h(1 - e^h), which lands outside the disc.
    """
    eh = mpmath.exp(h)
    e2h = eh * eh
    tail = {"e2h": e2h, "eh": eh}[discriminant_term]
    num = h * (e2h + 1) - e2h + 1 - (eh - 1) * mpmath.sqrt(h**2 * (eh + 1) ** 2 + 2 * h * (1 - tail))
    den = 1 - e2h + 2 * h * eh
    return num / den


def closed_form_m2(N: int, dps: Optional[int] = None) -> QuadratureRule:
    """m = 2 closed form with the explicit root lam_1 and the factor K(h)."""
    N = _check_n(N, 2)
    with working_precision(dps):
        h = mpmath.mpf(1) / N
        eh = mpmath.exp(h)
        em1 = mpmath.expm1(h)
        lam = _lambda_m2(h)
        if not abs(lam) < 1:
            raise PrecisionError(f"closed-form lambda_1 = {lam} is not inside the unit disc")
        K = (2 * em1 - h * eh - h) * (lam - 1) / (2 * em1**2 * (lam + lam ** (N + 1)))
        c = [1 - h / em1 - K * (lam - lam**N)]
        for b in range(1, N):
            c.append(h + K * ((eh - lam) * lam**b + (1 - lam * eh) * lam ** (N - b)))
        c.append(-1 + eh * h / em1 - K * (lam - lam**N) * eh)
        return _make_rule(2, N, c, "closed_form_m2")


def _ipow(z, n: int):
    # binary powering keeps |z|^N stable for large N
    result = mpmath.mpc(1)
    base = mpmath.mpc(z)
    while n:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def _even_bracket(lam, N: int, h, j: int, first: bool):
    """sum_{l=2}^{j} h^{2l-2}/(2l-2)! sum_{i=1}^{2l-2} (...) Delta^i 0^{2l-2}."""
    total = mpmath.mpc(0)
    for l in range(2, j + 1):
        k = 2 * l - 2
        inner = mpmath.mpc(0)
        for i in range(1, k + 1):
            d = forward_diff_zero(i, k)
            if first:
                inner += lam * d / (lam - 1) ** (i + 1)
            else:
                inner += _ipow(lam, N + i) * d / (1 - lam) ** (i + 1)
        total += h**k / factorial(k) * inner
    return total


def _odd_bracket(lam, N: int, h, j: int, first: bool):
    total = mpmath.mpc(0)
    for l in range(1, j + 1):
        k = 2 * l - 1
        inner = mpmath.mpc(0)
        for i in range(1, k + 1):
            d = forward_diff_zero(i, k)
            if first:
                inner += lam * d / (lam - 1) ** (i + 1)
            else:
                inner += _ipow(lam, N + i) * d / (1 - lam) ** (i + 1)
        total += h**k / factorial(k) * inner
    return total


def _odd_rhs(h, j: int, variant: str):
    if variant == "h_even":
        return mpmath.fsum(h ** (2 * l) * _q(bernoulli(2 * l)) / factorial(2 * l) for l in range(1, j + 1))
    if variant == "h_odd":
        return mpmath.fsum(
            h ** (2 * l - 1) * _q(bernoulli(2 * l)) / factorial(2 * l) for l in range(1, j + 1)
        )
    raise ValueError(f"unknown odd-family variant {variant!r}")


def _moment_a(lam, N: int, h, j: int):
    s = mpmath.mpc(0)
    for l in range(1, j + 1):
        inner = mpmath.fsum(
            _ipow(lam, N + i) * forward_diff_zero(i, l) / (1 - lam) ** (i + 1)
            for i in range(1, l + 1)
        )
        s += h**l * comb(j, l) * inner
    s -= h**j * mpmath.fsum(
        _ipow(lam, i) * forward_diff_zero(i, j) / (1 - lam) ** (i + 1) for i in range(1, j + 1)
    )
    return s


def _moment_b(lam, N: int, h, j: int):
    s = mpmath.mpc(0)
    for l in range(1, j + 1):
        inner = mpmath.fsum(
            lam * forward_diff_zero(i, l) / (lam - 1) ** (i + 1) for i in range(1, l + 1)
        )
        s += h**l * comb(j, l) * inner
    s -= h**j * mpmath.fsum(
        _ipow(lam, N + 1) * forward_diff_zero(i, j) / (lam - 1) ** (i + 1) for i in range(1, j + 1)
    )
    return s


def _moment_rhs(h, j: int):
    return mpmath.fsum(
        _q(factorial(j) * bernoulli(j + 1 - l)) / (factorial(l) * factorial(j + 1 - l))
        * h ** (j + 1 - l)
        for l in range(1, j)
    )


def assemble_system(m: int, N: int, roots: StableRootSet, variant: str = ODD_RHS_VARIANT):
    """The (2m-2) x (2m-2) complex system for (a_1..a_{m-1}, b_1..b_{m-1}).

    Row order: two exponential rows, even family j = 2..m//2, odd family
    j = 1..(m-1)//2, moment family j = 1..m-2.
    """
    m = check_order(m)
    if m < 2:
        raise ValueError("the (a, b) system exists for m >= 2 only")
    N = _check_n(N, m)
    lams = list(roots)
    if len(lams) != m - 1:
        raise ValueError(f"need {m - 1} stable roots, got {len(lams)}")
    h = mpmath.mpf(1) / N
    eh = mpmath.exp(h)
    em1 = mpmath.expm1(h)
    rows, rhs = [], []

    exp_rhs = (h - 2) / (2 * em1) + h / em1**2
    rows.append(
        [lam / ((lam - 1) * (lam - eh)) for lam in lams]
        + [_ipow(lam, N + 1) / ((lam - 1) * (lam * eh - 1)) for lam in lams]
    )
    rhs.append(exp_rhs)
    rows.append(
        [_ipow(lam, N + 1) / ((lam - 1) * (lam - eh)) for lam in lams]
        + [lam / ((lam - 1) * (lam * eh - 1)) for lam in lams]
    )
    rhs.append(exp_rhs)

    for j in range(2, m // 2 + 1):
        rows.append(
            [_even_bracket(lam, N, h, j, True) for lam in lams]
            + [_even_bracket(lam, N, h, j, False) for lam in lams]
        )
        rhs.append(mpmath.mpf(0))

    for j in range(1, (m - 1) // 2 + 1):
        rows.append(
            [_odd_bracket(lam, N, h, j, True) for lam in lams]
            + [_odd_bracket(lam, N, h, j, False) for lam in lams]
        )
        rhs.append(_odd_rhs(h, j, variant))

    for j in range(1, m - 1):
        rows.append([_moment_a(lam, N, h, j) for lam in lams] + [_moment_b(lam, N, h, j) for lam in lams])
        rhs.append(_moment_rhs(h, j))

    assert len(rows) == 2 * m - 2, f"assembled {len(rows)} rows, expected {2 * m - 2}"
    return mpmath.matrix(rows), mpmath.matrix([mpmath.mpc(r) for r in rhs])


def specialised_system(m: int, N: int, roots: StableRootSet):
    """The specialised systems written out for m = 3 (4 rows) and m = 4 (6 rows)."""
    if m not in (3, 4):
        raise ValueError("specialised systems exist for m = 3 and m = 4 only")
    N = _check_n(N, m)
    lams = list(roots)
    h = mpmath.mpf(1) / N
    eh = mpmath.exp(h)
    em1 = mpmath.expm1(h)
    exp_rhs = (h - 2) / (2 * em1) + h / em1**2
    rows = [
        [lam / ((lam - 1) * (lam - eh)) for lam in lams]
        + [_ipow(lam, N + 1) / ((lam - 1) * (lam * eh - 1)) for lam in lams],
        [_ipow(lam, N + 1) / ((lam - 1) * (lam - eh)) for lam in lams]
        + [lam / ((lam - 1) * (lam * eh - 1)) for lam in lams],
        [lam / (lam - 1) ** 2 for lam in lams] + [_ipow(lam, N + 1) / (lam - 1) ** 2 for lam in lams],
        [_ipow(lam, N + 1) / (lam - 1) ** 2 for lam in lams] + [lam / (lam - 1) ** 2 for lam in lams],
    ]
    rhs = [exp_rhs, exp_rhs, h / 12, h / 12]
    if m == 4:
        rows.append(
            [lam / (lam - 1) ** 3 for lam in lams]
            + [_ipow(lam, N + 2) / (1 - lam) ** 3 for lam in lams]
        )
        rhs.append(-h / 24)
        rows.append(
            [(lam**2 - _ipow(lam, N + 2)) / (1 - lam) ** 3 for lam in lams]
            + [(_ipow(lam, N + 1) - lam) / (lam - 1) ** 3 for lam in lams]
        )
        rhs.append(mpmath.mpf(0))
    return mpmath.matrix(rows), mpmath.matrix([mpmath.mpc(r) for r in rhs])


def _equilibrated_condition(A: mpmath.matrix) -> float:
    # row then column max-abs scaling; column scaling only rescales unknowns
    B = A.copy()
    for i in range(B.rows):
        s = max(abs(B[i, j]) for j in range(B.cols))
        for j in range(B.cols):
            B[i, j] /= s
    for j in range(B.cols):
        s = max(abs(B[i, j]) for i in range(B.rows))
        for i in range(B.rows):
            B[i, j] /= s
    try:
        inv = mpmath.inverse(B)
    except ZeroDivisionError:
        return math.inf
    return float(mpmath.norm(B, 1) * mpmath.norm(inv, 1))


def solve_ab(system, roots: StableRootSet) -> ABSolution:
    """LU solve of the (a, b) system; refuses ill-conditioned systems."""
    A, rhs = system
    cond = _equilibrated_condition(A)
    limit = condition_limit(COND_LIMIT)
    if not cond < limit:
        raise PrecisionError(f"(a, b) system condition estimate {cond:.3e} exceeds {limit:.0e}")
    x = mpmath.lu_solve(A, rhs)
    res = float(mpmath.norm(A * x - rhs) / max(mpmath.norm(rhs), mpmath.mpf(1) * 1e-300))
    if res > 1e-10:
        raise PrecisionError(f"(a, b) solve residual {res:.3e}")
    k = A.rows // 2
    return ABSolution(tuple(x[i] for i in range(k)), tuple(x[k + i] for i in range(k)), roots, res, cond)


def _guard(den, what: str):
    if abs(den) < DENOM_TOL:
        raise PrecisionError(f"{what} denominator {complex(den)} is below {DENOM_TOL}")
    return den


def _general_coefficients(m: int, N: int, variant: str) -> tuple[list, ABSolution]:
    h = mpmath.mpf(1) / N
    roots = stable_roots(char_poly(m, h), m, h)
    ab = solve_ab(assemble_system(m, N, roots, variant), roots)
    e = mpmath.e
    eh = mpmath.exp(h)
    em1 = mpmath.expm1(h)
    ehe = eh * e

    c0 = (em1 - h) / em1
    cn = (eh * h - em1) / em1
    for a, b, lam in zip(ab.a, ab.b, roots):
        lN = _ipow(lam, N)
        lN1 = lN * lam
        den_a = _guard((e - 1) * (1 - lam) * (eh - lam), "C_0/C_N a-term")
        c0 += a * (lam * (eh - e) + lam**2 * (e - 1) + lN1 * (1 - eh)) / den_a
        c0 += b * (lN1 * (eh - e) + lN * (e - 1) + lam * (1 - eh)) / _guard(
            (e - 1) * (lam - 1) * (lam * eh - 1), "C_0 b-term"
        )
        cn += a * (lam * (e - ehe) + lN * (ehe - eh) + lN1 * (eh - e)) / den_a
        cn += b * (lN1 * (e - ehe) + lam**2 * (ehe - eh) + lam * (eh - e)) / _guard(
            (e - 1) * (1 - lam) * (1 - lam * eh), "C_N b-term"
        )
    coeffs = [c0]
    for beta in range(1, N):
        s = h + mpmath.fsum(
            a * _ipow(lam, beta) + b * _ipow(lam, N - beta) for a, b, lam in zip(ab.a, ab.b, roots)
        )
        coeffs.append(s)
    coeffs.append(cn)

    worst = max(abs(mpmath.mpc(c).imag) for c in coeffs)
    if worst > IMAG_TOL:
        raise PrecisionError(f"imaginary residue {float(worst):.3e} in coefficients")
    return [mpmath.re(c) for c in coeffs], ab


def coefficients(
    m: int, N: int, method: Optional[str] = None, dps: Optional[int] = None
) -> QuadratureRule:
    """Optimal rule for order m on N + 1 equally spaced nodes.

    m = 1 and m = 2 use their closed forms unless ``method`` says otherwise;
    m >= 2 may request ``method="theorem_4_6"`` (the general (a, b) route) or
    ``method="oracle"`` (dense saddle-point solve).
    """
    m = check_order(m)
    if method is None:
        method = {1: "closed_form_m1", 2: "closed_form_m2"}.get(m, "theorem_4_6")
    if method == "closed_form_m1":
        if m != 1:
            raise ValueError("closed_form_m1 is for m = 1")
        return closed_form_m1(N, dps)
    if method == "closed_form_m2":
        if m != 2:
            raise ValueError("closed_form_m2 is for m = 2")
        return closed_form_m2(N, dps)
    if method == "oracle":
        return oracle_rule(m, N, dps)
    if method != "theorem_4_6":
        raise ValueError(f"unknown method {method!r}")
    if m < 2:
        raise ValueError("the general route needs m >= 2")
    N = _check_n(N, m)
    with working_precision(dps or auto_dps(m, N)):
        coeffs, _ = _general_coefficients(m, N, ODD_RHS_VARIANT)
        return _make_rule(m, N, coeffs, "theorem_4_6")


def ab_solution(m: int, N: int, variant: str = ODD_RHS_VARIANT, dps: Optional[int] = None) -> ABSolution:
    m = check_order(m)
    N = _check_n(N, m)
    with working_precision(dps or auto_dps(m, N)):
        h = mpmath.mpf(1) / N
        roots = stable_roots(char_poly(m, h), m, h)
        return solve_ab(assemble_system(m, N, roots, variant), roots)


def oracle_rule(m: int, N: int, dps: Optional[int] = None) -> QuadratureRule:
    from .oracle import solve_full_system

    m = check_order(m)
    N = _check_n(N, max(m - 1, 1))
    dps = dps or auto_dps(m, N)
    with working_precision(dps):
        nodes = [mpmath.mpf(b) / N for b in range(N + 1)]
        result = solve_full_system(m, nodes, dps)
        return _make_rule(m, N, result.coeffs, "oracle")


def integrate(rule: QuadratureRule, samples: Sequence) -> float:
    """sum_b C_b phi(x_b) with compensated summation."""
    samples = list(samples)
    if len(samples) != rule.N + 1:
        raise ValueError(f"expected {rule.N + 1} samples, got {len(samples)}")
    if samples and isinstance(samples[0], (mpmath.mpf, mpmath.mpc)):
        return mpmath.fsum(c * s for c, s in zip(rule.high_precision_coeffs, samples))
    return math.fsum(float(c) * float(s) for c, s in zip(rule.coeffs, samples))
