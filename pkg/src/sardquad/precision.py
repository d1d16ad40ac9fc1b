"""Working-precision settings shared by the numerical modules.

The optimal error norms fall to ~1e-11 (squared ~1e-22) while the
quadratic form that produces them is built from terms of size ~1e-4, so
all heavy lifting happens in mpmath at ``DEFAULT_DPS`` decimal digits.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from typing import Iterator, Optional

import mpmath

DEFAULT_DPS = 50


@contextmanager
def working_precision(dps: Optional[int] = None) -> Iterator[int]:
    """Raise mpmath precision to at least ``dps`` for the enclosed block."""
    target = DEFAULT_DPS if dps is None else int(dps)
    target = max(target, mpmath.mp.dps)
    with mpmath.workdps(target):
        yield target


def auto_dps(m: int, N: int) -> int:
    """Digits needed so that about 30 survive the h^(2m) cancellations."""
    return max(DEFAULT_DPS, 30 + math.ceil(2 * m * math.log10(max(N, 10))) + 2 * m)


def condition_limit(base: float = 1e12) -> float:
    """``base`` is the limit for 16-digit arithmetic; scaled to the ambient precision."""
    return base * 10.0 ** max(mpmath.mp.dps - 16, 0)


def eps() -> mpmath.mpf:
    return mpmath.mpf(2) ** (-mpmath.mp.prec)
