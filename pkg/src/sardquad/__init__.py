"""Sard-optimal quadrature on [0, 1] in W_2^(m,m-1)."""

__version__ = "0.1.0"

from .charpoly import RootStructureError, StableRootSet, char_poly, stable_roots
from .combinatorics import CapacityError, Polynomial, bernoulli, euler_frobenius, forward_diff_zero
from .discrete_operator import DiscreteOperator, build_discrete_operator, convolve
from .error_norm import ErrorReport, InconsistencyError, error_bound, norm_squared
from .kernel import green_kernel, kernel_constant, rhs_moment
from .oracle import ConditioningWarning, solve_full_system
from .solver import (
    METHODS,
    PrecisionError,
    QuadratureRule,
    closed_form_m1,
    closed_form_m2,
    coefficients,
    integrate,
)

__all__ = [
    "CapacityError",
    "ConditioningWarning",
    "DiscreteOperator",
    "ErrorReport",
    "InconsistencyError",
    "METHODS",
    "Polynomial",
    "PrecisionError",
    "QuadratureRule",
    "RootStructureError",
    "StableRootSet",
    "bernoulli",
    "build_discrete_operator",
    "char_poly",
    "closed_form_m1",
    "closed_form_m2",
    "coefficients",
    "convolve",
    "error_bound",
    "euler_frobenius",
    "forward_diff_zero",
    "green_kernel",
    "integrate",
    "kernel_constant",
    "norm_squared",
    "rhs_moment",
    "solve_full_system",
    "stable_roots",
]
