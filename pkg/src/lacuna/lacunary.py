"""Lacunary partitions theta = (k_r): block geometry and refinements.

A partition stores the strictly increasing points k_0 < k_1 < ... < k_R
(k_0 >= 1 so every ratio q_r = k_r / k_{r-1} is defined), the gaps
h_r = k_r - k_{r-1}, and the exact rational ratios q_r.  Blocks are the
integer intervals I_r = (k_{r-1}, k_r].  The gap condition h_r -> infinity
is asymptotic and cannot be verified on a finite prefix, so a
non-increasing gap prefix yields a diagnostic, never an error.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .core import _check_positive_int


@dataclass(frozen=True)
class LacunaryPartition:
    points: tuple[int, ...]
    h: tuple[int, ...] = field(init=False)
    q: tuple[Fraction, ...] = field(init=False)
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        pts = self.points
        if len(pts) < 2:
            raise ValueError("a partition needs at least two points (one block)")
        if pts[0] < 1:
            raise ValueError(f"k_0 must be >= 1, got {pts[0]}")
        for a, b in zip(pts, pts[1:]):
            if b <= a:
                raise ValueError(f"points must be strictly increasing; {b} follows {a}")
        object.__setattr__(self, "h", tuple(b - a for a, b in zip(pts, pts[1:])))
        object.__setattr__(self, "q", tuple(Fraction(b, a) for a, b in zip(pts, pts[1:])))

    @property
    def R(self) -> int:
        return len(self.points) - 1

    def block(self, r: int) -> range:
        """Indices of I_r = (k_{r-1}, k_r], 1-based block number."""
        if not 1 <= r <= self.R:
            raise ValueError(f"block index {r} out of range 1..{self.R}")
        return range(self.points[r - 1] + 1, self.points[r] + 1)

    def blocks(self):
        for r in range(1, self.R + 1):
            yield r, self.block(r)


def from_points(points) -> LacunaryPartition:
    """Partition from explicit points; warns (diagnostic) on non-increasing gaps."""
    pts = tuple(int(p) for p in points)
    if not pts:
        raise ValueError("points must be nonempty")
    for p in pts:
        _check_positive_int(p, "point")
    part = LacunaryPartition(points=pts)
    diags = []
    if any(b <= a for a, b in zip(part.h, part.h[1:])):
        diags.append("h not increasing on prefix")
    if diags:
        part = LacunaryPartition(points=pts, diagnostics=tuple(diags))
    return part


def geometric(k0: int, rho: float, R: int) -> LacunaryPartition:
    """Geometric-growth partition with every q_r > 1 and strictly increasing gaps.

    k_r = max(k_{r-1} + h_{r-1} + 1, ceil(k0 * rho**r)); the first branch
    forces the gaps to grow strictly even where the geometric target stalls.
    """
    _check_positive_int(k0, "k0")
    _check_positive_int(R, "R")
    if not (rho > 1 and math.isfinite(rho)):
        raise ValueError(f"rho must be > 1, got {rho!r}")
    pts = [k0]
    prev_h = 0
    for r in range(1, R + 1):
        nxt = max(pts[-1] + prev_h + 1, math.ceil(k0 * rho**r))
        prev_h = nxt - pts[-1]
        pts.append(nxt)
    return LacunaryPartition(points=tuple(pts))


def block(theta: LacunaryPartition, r: int) -> range:
    return theta.block(r)


@dataclass(frozen=True)
class RefinementMap:
    """A refinement theta' of theta with the child blocks grouped per parent block.

    groups[r-1] holds the 1-based child block indices whose union is the
    parent block I_r; conservation sum_t h'_{r,t} = h_r is checked on
    construction.
    """

    parent: LacunaryPartition
    child: LacunaryPartition
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.groups) != self.parent.R:
            raise ValueError("one child-block group per parent block required")
        for r, grp in enumerate(self.groups, start=1):
            hsum = sum(self.child.h[t - 1] for t in grp)
            if hsum != self.parent.h[r - 1]:
                raise ValueError(
                    f"refinement does not conserve block {r}: "
                    f"sum of child gaps {hsum} != h_r {self.parent.h[r - 1]}"
                )

    def eta(self, r: int) -> int:
        """Number of child blocks inside parent block r."""
        return len(self.groups[r - 1])


def refine(theta: LacunaryPartition, extra) -> RefinementMap:
    """Insert extra points into theta, producing the refinement map."""
    extra_pts = sorted(int(p) for p in extra)
    existing = set(theta.points)
    lo, hi = theta.points[0], theta.points[-1]
    seen = set()
    for p in extra_pts:
        if p in existing:
            raise ValueError(f"extra point {p} duplicates an existing point")
        if p in seen:
            raise ValueError(f"extra point {p} given twice")
        if not lo < p <= hi:
            raise ValueError(f"extra point {p} outside ({lo}, {hi}]")
        seen.add(p)
    child = LacunaryPartition(points=tuple(sorted(theta.points + tuple(extra_pts))))
    groups = []
    t = 1
    for r in range(1, theta.R + 1):
        grp = []
        while t <= child.R and child.points[t] <= theta.points[r]:
            grp.append(t)
            t += 1
        groups.append(tuple(grp))
    return RefinementMap(parent=theta, child=child, groups=tuple(groups))


@dataclass(frozen=True)
class RatioStats:
    """Prefix evidence for the liminf/limsup hypotheses, never a proof."""

    min_q: Fraction
    max_q: Fraction
    tail_min_q: Fraction
    tail_max_q: Fraction


def ratio_stats(theta: LacunaryPartition) -> RatioStats:
    """Min/max of q_r overall and over the last ceil(R/2) blocks."""
    if theta.R < 2:
        raise ValueError("ratio statistics need at least 2 blocks")
    tail = theta.q[-((theta.R + 1) // 2):]
    return RatioStats(
        min_q=min(theta.q),
        max_q=max(theta.q),
        tail_min_q=min(tail),
        tail_max_q=max(tail),
    )


def random_geometric(rng: random.Random, k0_max: int = 8, R_range=(3, 12),
                     rho_range=(1.1, 3.0)) -> LacunaryPartition:
    """Seeded random geometric partition for property-test draws."""
    k0 = rng.randint(1, k0_max)
    R = rng.randint(*R_range)
    rho = rng.uniform(*rho_range)
    return geometric(k0, rho, R)
