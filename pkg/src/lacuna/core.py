"""Integer gcd kernel and the arithmetic residual stream |x_m - x_<m,n>|.

Indexing is 1-based everywhere: the gcd index <m,n> is always >= 1, so
index 0 does not exist.  All functions here are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Inputs beyond the 64-bit signed range are rejected rather than silently
# widened; callers relying on machine-integer semantics get an error.
INT_MAX = 2**63 - 1


class EvaluationError(Exception):
    """A sequence rule failed at a concrete index."""

    def __init__(self, index: int, message: str):
        super().__init__(f"evaluation failed at m={index}: {message}")
        self.index = index


def _check_positive_int(value: int, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    if value > INT_MAX:
        raise ValueError(f"{name} exceeds the 64-bit range: {value}")
    return value


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of two positive integers."""
    _check_positive_int(a, "a")
    _check_positive_int(b, "b")
    return math.gcd(a, b)


def arith_index(m: int, n: int) -> int:
    """The gcd index <m,n>: divides both m and n, and <m+n,n> = <m,n>."""
    _check_positive_int(m, "m")
    _check_positive_int(n, "n")
    return math.gcd(m, n)


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    _check_positive_int(n, "n")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class ResidualStream:
    """Materialized residuals |x_m - x_<m,n>| for m = 1..horizon_M."""

    witness_n: int
    horizon_M: int
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != self.horizon_M:
            raise ValueError("stream length must equal horizon_M")

    def sup(self) -> float:
        return max(self.values)


def residual_values(x, n: int, M: int) -> list[float]:
    """Residual list [ |x_m - x_<m,n>| for m = 1..M ] without the wrapper.

    Evaluation failures are re-raised as EvaluationError carrying the
    offending index.
    """
    _check_positive_int(n, "n")
    _check_positive_int(M, "M")
    try:
        vals = x.prefix(M)
    except EvaluationError:
        raise
    except Exception as exc:
        # Re-walk one index at a time to locate the failure.
        for m in range(1, M + 1):
            try:
                x.eval(m)
            except Exception as inner:
                raise EvaluationError(m, str(inner)) from inner
        raise EvaluationError(M, str(exc)) from exc
    g = math.gcd
    return [abs(vals[m] - vals[g(m, n)]) for m in range(1, M + 1)]


def residuals(x, n: int, M: int) -> ResidualStream:
    """Arithmetic residual stream of sequence x for witness n on 1..M."""
    return ResidualStream(witness_n=n, horizon_M=M, values=tuple(residual_values(x, n, M)))
