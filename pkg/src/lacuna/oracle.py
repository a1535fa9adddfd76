"""Independent recomputation path for every mean and residual.

Nothing here shares code or accumulators with the main path: gcds are
computed by hand (repeated subtraction, or a hand-rolled modulo loop for
large inputs), sequence values are fetched per index through eval (never
through the batched prefix), and sums are accumulated explicitly in the
contractual ascending order.  Tests compare the two paths; agreement is
evidence against logic bugs in either.
"""

from __future__ import annotations

from .lacunary import LacunaryPartition, RefinementMap
from .modulus import Modulus
from .sequences import Sequence


def gcd_subtraction(a: int, b: int) -> int:
    """Euclid's original form: subtract the smaller until equal."""
    if a < 1 or b < 1:
        raise ValueError("gcd_subtraction needs positive integers")
    while a != b:
        if a > b:
            a -= b
        else:
            b -= a
    return a


def gcd_mod(a: int, b: int) -> int:
    """Hand-rolled modulo Euclid (no math.gcd); for larger horizons."""
    if a < 1 or b < 1:
        raise ValueError("gcd_mod needs positive integers")
    while b:
        a, b = b, a % b
    return a


def residuals_subtraction(x: Sequence, n: int, M: int) -> list[float]:
    """Residual list recomputed with the subtraction gcd, one eval per index."""
    out = []
    for m in range(1, M + 1):
        g = gcd_subtraction(m, n)
        out.append(abs(x.eval(m) - x.eval(g)))
    return out


def block_mean(x: Sequence, theta: LacunaryPartition, r: int, n: int,
               f: Modulus | None = None) -> float:
    """Mean over I_r of (optionally modulus-mapped) residuals, from scratch."""
    lo, hi = theta.points[r - 1], theta.points[r]
    total = 0.0
    for m in range(lo + 1, hi + 1):
        v = abs(x.eval(m) - x.eval(gcd_mod(m, n)))
        if f is not None:
            v = f.eval(v)
        total += v
    return total / (hi - lo)


def block_means(x: Sequence, theta: LacunaryPartition, n: int,
                f: Modulus | None = None) -> list[float]:
    return [block_mean(x, theta, r, n, f) for r in range(1, theta.R + 1)]


def cesaro_mean_at(x: Sequence, n: int, t: int) -> float:
    """sigma_t recomputed from scratch (no running accumulator reuse)."""
    total = 0.0
    for m in range(1, t + 1):
        total += abs(x.eval(m) - x.eval(gcd_mod(m, n)))
    return total / t


def cesaro_means(x: Sequence, n: int, T: int) -> list[float]:
    """All sigma_t from scratch; quadratic, keep T small."""
    return [cesaro_mean_at(x, n, t) for t in range(1, T + 1)]


def block_sum(x: Sequence, theta: LacunaryPartition, r: int, n: int) -> float:
    lo, hi = theta.points[r - 1], theta.points[r]
    total = 0.0
    for m in range(lo + 1, hi + 1):
        total += abs(x.eval(m) - x.eval(gcd_mod(m, n)))
    return total


def refinement_sides(x: Sequence, rmap: RefinementMap, n: int, r: int) -> tuple[float, float]:
    """(h_r * tau_r, sum_t h'_{r,t} * tau'_{r,t}) recomputed independently."""
    lhs = block_sum(x, rmap.parent, r, n)
    rhs = 0.0
    for t in rmap.groups[r - 1]:
        h_child = rmap.child.h[t - 1]
        rhs += h_child * (block_sum(x, rmap.child, t, n) / h_child)
    return lhs, rhs


def relative_gap(a: float, b: float) -> float:
    """|a-b| scaled by the larger magnitude (0 when both are 0)."""
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale
