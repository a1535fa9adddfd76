"""Modulus functions: built-ins, combinators, and finite-grid verification.

A modulus f maps [0, inf) to [0, inf) with f(x) = 0 iff x = 0,
f(x+y) <= f(x) + f(y), f increasing, and f right-continuous at 0.  The
axioms are universally quantified, so verification here is grid-based
falsification, not proof; in particular the right-continuity check is a
necessary-condition check against a declared schedule only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

SUBADD_TOL = 1e-12

# Right-continuity schedule: pairs (eps, allowed f(eps)/f(1)).  A candidate
# passes a rung when its value at the largest grid point <= eps stays under
# the allowed ratio; rungs with no grid point that small are skipped.
RIGHT_CONTINUITY_SCHEDULE = ((1e-2, 0.9), (1e-4, 0.7), (1e-6, 0.5), (1e-8, 0.3))


@dataclass(frozen=True)
class Modulus:
    """Named scalar rule with an optional exact slope-at-infinity beta."""

    name: str
    rule: Callable[[float], float]
    declared_beta: float | None = None

    def eval(self, x: float) -> float:
        if x < 0:
            raise ValueError(f"modulus argument must be >= 0, got {x!r}")
        return self.rule(x)

    def __call__(self, x: float) -> float:
        return self.eval(x)


def identity() -> Modulus:
    return Modulus("identity", lambda x: x, declared_beta=1.0)


def power(p: float) -> Modulus:
    if not (0 < p <= 1):
        raise ValueError(f"power exponent must lie in (0, 1], got {p!r}")
    beta = 1.0 if p == 1 else 0.0
    return Modulus(f"power({p})", lambda x: x**p, declared_beta=beta)


def bounded() -> Modulus:
    return Modulus("bounded", lambda x: x / (1.0 + x), declared_beta=0.0)


def sum_of(f1: Modulus, f2: Modulus) -> Modulus:
    beta = None
    if f1.declared_beta is not None and f2.declared_beta is not None:
        beta = f1.declared_beta + f2.declared_beta
    r1, r2 = f1.rule, f2.rule
    return Modulus(f"sum({f1.name}, {f2.name})", lambda x: r1(x) + r2(x), declared_beta=beta)


def compose(f: Modulus, g: Modulus) -> Modulus:
    fr, gr = f.rule, g.rule
    return Modulus(f"compose({f.name}, {g.name})", lambda x: fr(gr(x)))


def iterate(f: Modulus, i: int) -> Modulus:
    if not isinstance(i, int) or isinstance(i, bool) or i < 1:
        raise ValueError(f"iteration count must be an integer >= 1, got {i!r}")
    fr = f.rule

    def rule(x: float) -> float:
        for _ in range(i):
            x = fr(x)
        return x

    return Modulus(f"iterate({f.name}, {i})", rule)


_BUILTINS = ("identity", "power", "bounded", "sum", "compose", "iterate")


def builtin(kind: str, *params) -> Modulus:
    """Construct a built-in modulus by tag; combinators take moduli arguments."""
    if kind == "identity":
        return identity()
    if kind == "power":
        return power(*params)
    if kind == "bounded":
        return bounded()
    if kind == "sum":
        return sum_of(*params)
    if kind == "compose":
        return compose(*params)
    if kind == "iterate":
        return iterate(*params)
    raise ValueError(f"unknown modulus kind {kind!r}; known: {list(_BUILTINS)}")


def log_grid(lo: float, hi: float, count: int) -> list[float]:
    """count log-spaced points from lo to hi inclusive, endpoints exact."""
    if not (0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    if count < 2:
        raise ValueError("need at least 2 points")
    la, lb = math.log10(lo), math.log10(hi)
    pts = [10 ** (la + k * (lb - la) / (count - 1)) for k in range(count)]
    pts[0], pts[-1] = lo, hi
    return pts


def default_grid() -> list[float]:
    """{0} plus 200 log-spaced points covering 1e-8 .. 1e4."""
    return [0.0] + log_grid(1e-8, 1e4, 200)


@dataclass(frozen=True)
class AxiomCheck:
    passed: bool
    worst_witness: tuple
    violation: float


@dataclass(frozen=True)
class AxiomReport:
    checks: dict[str, AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]


def verify_axioms(f: Modulus, grid: list[float] | None = None) -> AxiomReport:
    """Grid-based check of the four axioms plus |f(x)-f(y)| <= f(|x-y|)."""
    if grid is None:
        grid = default_grid()
    if not grid:
        raise ValueError("grid must be nonempty")
    pts = sorted(set(float(g) for g in grid))
    if pts[0] != 0.0:
        raise ValueError("grid must include 0")
    pos = pts[1:]
    if not pos or pos[-1] / pos[0] < 1e2:
        raise ValueError("grid must span at least 3 orders of magnitude above 0")

    vals = {x: f.eval(x) for x in pts}
    checks: dict[str, AxiomCheck] = {}

    # (i) f(x) = 0 iff x = 0
    worst, wit = math.inf, (0.0,)
    zero_ok = vals[0.0] == 0.0
    for x in pos:
        if vals[x] < worst:
            worst, wit = vals[x], (x,)
    pos_ok = worst > 0.0
    checks["zero_iff_zero"] = AxiomCheck(
        passed=zero_ok and pos_ok,
        worst_witness=(0.0,) if not zero_ok else wit,
        violation=abs(vals[0.0]) if not zero_ok else (0.0 if pos_ok else 1.0),
    )

    # (ii) subadditivity on all grid pairs
    worst, wit = math.inf, ()
    for x in pts:
        fx = vals[x]
        for y in pts:
            slack = fx + vals[y] - f.eval(x + y)
            if slack < worst:
                worst, wit = slack, (x, y)
    checks["subadditive"] = AxiomCheck(
        passed=worst >= -SUBADD_TOL, worst_witness=wit, violation=max(0.0, -worst)
    )

    # (iii) increasing on the sorted grid
    worst, wit = math.inf, ()
    for a, b in zip(pts, pts[1:]):
        slack = vals[b] - vals[a]
        if slack < worst:
            worst, wit = slack, (a, b)
    checks["increasing"] = AxiomCheck(
        passed=worst >= -SUBADD_TOL, worst_witness=wit, violation=max(0.0, -worst)
    )

    # (iv) right continuity at 0 against the declared schedule
    f1 = f.eval(1.0)
    worst, wit = math.inf, ()
    rc_ok = True
    if f1 > 0:
        for eps, ratio in RIGHT_CONTINUITY_SCHEDULE:
            candidates = [x for x in pos if x <= eps]
            if not candidates:
                continue
            x = candidates[-1]
            slack = ratio * f1 - vals[x]
            if slack < worst:
                worst, wit = slack, (x, eps)
            if slack < 0:
                rc_ok = False
    checks["right_continuous_at_0"] = AxiomCheck(
        passed=rc_ok,
        worst_witness=wit,
        violation=0.0 if rc_ok else max(0.0, -worst),
    )

    # derived: |f(x) - f(y)| <= f(|x - y|) (continuity everywhere)
    worst, wit = math.inf, ()
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            slack = f.eval(y - x) - (vals[y] - vals[x])
            if slack < worst:
                worst, wit = slack, (x, y)
    checks["lipschitz_by_modulus"] = AxiomCheck(
        passed=worst >= -SUBADD_TOL, worst_witness=wit, violation=max(0.0, -worst)
    )

    return AxiomReport(checks=checks)


@dataclass(frozen=True)
class FisherResult:
    passed: bool
    min_slack: float
    worst_x: float


def fisher_check(f: Modulus, delta: float, grid: list[float]) -> FisherResult:
    """Check f(x) <= 2 f(1) x / delta for every grid point x >= delta."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    if not grid:
        raise ValueError("grid must be nonempty")
    bad = [x for x in grid if x < delta]
    if bad:
        raise ValueError(f"grid points must be >= delta; offending: {bad[:3]}")
    bound = 2.0 * f.eval(1.0) / delta
    min_slack, worst_x = math.inf, grid[0]
    for x in grid:
        slack = bound * x - f.eval(x)
        if slack < min_slack:
            min_slack, worst_x = slack, x
    return FisherResult(passed=min_slack >= 0.0, min_slack=min_slack, worst_x=worst_x)


@dataclass(frozen=True)
class BetaEstimate:
    beta_hat: float
    lower_bound_ok: bool | None


def beta_estimate(f: Modulus, t_max: float, count: int = 200) -> BetaEstimate:
    """Empirical slope at infinity: min of f(t)/t over a log grid up to t_max.

    For subadditive increasing f the infimum of f(t)/t is the limit, so the
    grid minimum is an upper estimate converging from above.  When a beta
    is declared, also reports whether f(t) >= beta*t held at every point.
    """
    if not t_max >= 100:
        raise ValueError(f"t_max must be >= 100, got {t_max!r}")
    grid = log_grid(1.0, float(t_max), count)
    beta_hat = min(f.eval(t) / t for t in grid)
    lower_ok = None
    if f.declared_beta is not None:
        b = f.declared_beta
        lower_ok = all(f.eval(t) >= b * t - 1e-12 for t in grid)
    return BetaEstimate(beta_hat=beta_hat, lower_bound_ok=lower_ok)
