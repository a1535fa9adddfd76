"""Deterministic sequence constructors used as fixtures by the checks.

Each family is engineered so membership (or non-membership) in the
residual-mean spaces is known by construction: gcd-class sequences have
identically zero residuals at their defining witness, block spikes have
exact block-mean formulas, and so on.  Every sequence is total on m >= 1
and bit-reproducible from its parameters alone (the seed field is
reserved; v1 families are fully deterministic).
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable

from .core import EvaluationError, _check_positive_int, divisors
from .lacunary import LacunaryPartition


@dataclass(frozen=True)
class DivisorTable:
    """Real value per divisor of n0; keys must be exactly the divisors."""

    n0: int
    values: dict[int, float]

    def __post_init__(self):
        _check_positive_int(self.n0, "n0")
        expected = set(divisors(self.n0))
        got = set(self.values)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise ValueError(
                f"divisor table for n0={self.n0} must cover exactly its divisors; "
                f"missing {missing}, extraneous {extra}"
            )
        for d, v in self.values.items():
            if not math.isfinite(v):
                raise ValueError(f"table value for divisor {d} is not finite")


@dataclass(frozen=True)
class Sequence:
    """A named, deterministic evaluation rule index -> real."""

    name: str
    params: dict
    rule: Callable[[int], float]
    seed: int = 0
    batch_rule: Callable[[int], list[float]] | None = field(default=None, repr=False)

    def eval(self, m: int) -> float:
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise ValueError(f"sequence index must be an integer >= 1, got {m!r}")
        return self.rule(m)

    def __call__(self, m: int) -> float:
        return self.eval(m)

    def prefix(self, M: int) -> list[float]:
        """Values at m = 1..M as a 1-indexed list (slot 0 is a nan pad)."""
        _check_positive_int(M, "M")
        if self.batch_rule is not None:
            return self.batch_rule(M)
        rule = self.rule
        return [math.nan] + [rule(m) for m in range(1, M + 1)]


def gcd_class(table: DivisorTable) -> Sequence:
    """x_m = table[<m, n0>]; residuals w.r.t. n0 are identically zero."""
    n0 = table.n0
    values = dict(table.values)
    g = math.gcd

    def rule(m: int) -> float:
        return values[g(m, n0)]

    def batch(M: int) -> list[float]:
        return [math.nan] + [values[g(m, n0)] for m in range(1, M + 1)]

    return Sequence(
        name=f"gcd_class(n0={n0})",
        params={"n0": n0, "table": values},
        rule=rule,
        batch_rule=batch,
    )


def perturbed_gcd_class(table: DivisorTable, decay: float) -> Sequence:
    """gcd-class values plus a c/m tail; residual at m is |c/m - c/<m,n0>|."""
    if not (decay > 0 and math.isfinite(decay)):
        raise ValueError(f"decay must be a positive finite real, got {decay!r}")
    n0 = table.n0
    values = dict(table.values)
    c = float(decay)
    g = math.gcd

    def rule(m: int) -> float:
        return values[g(m, n0)] + c / m

    def batch(M: int) -> list[float]:
        return [math.nan] + [values[g(m, n0)] + c / m for m in range(1, M + 1)]

    return Sequence(
        name=f"perturbed_gcd_class(n0={n0}, c={c})",
        params={"n0": n0, "table": values, "decay": c},
        rule=rule,
        batch_rule=batch,
    )


def block_spike(
    theta: LacunaryPartition, height: float, spikes_per_block: int | list[int]
) -> Sequence:
    """Baseline 0 with spikes of the given height at each block's largest indices.

    spikes_per_block may be one count shared by all blocks or one count per
    block; counts are clamped nowhere -- a count exceeding the block length
    is an error.
    """
    if not (height > 0 and math.isfinite(height)):
        raise ValueError(f"height must be a positive finite real, got {height!r}")
    if isinstance(spikes_per_block, int) and not isinstance(spikes_per_block, bool):
        counts = [spikes_per_block] * theta.R
    else:
        counts = [int(s) for s in spikes_per_block]
        if len(counts) != theta.R:
            raise ValueError(
                f"need one spike count per block: got {len(counts)} for R={theta.R}"
            )
    for r, s in enumerate(counts, start=1):
        if s < 0:
            raise ValueError(f"spike count for block {r} is negative")
        if s > theta.h[r - 1]:
            raise ValueError(
                f"block {r} has h_r={theta.h[r - 1]} indices but {s} spikes requested"
            )

    points = theta.points
    counts_t = tuple(counts)
    H = float(height)

    def rule(m: int) -> float:
        if m <= points[0] or m > points[-1]:
            return 0.0
        r = bisect_left(points, m)  # block index: points[r-1] < m <= points[r]
        return H if m > points[r] - counts_t[r - 1] else 0.0

    return Sequence(
        name=f"block_spike(H={H})",
        params={"points": points, "height": H, "spikes": counts_t},
        rule=rule,
    )


def explicit_list(prefix: list[float] | tuple[float, ...], tail: float = 0.0) -> Sequence:
    """Listed prefix values followed by a constant tail (keeps x total)."""
    vals = tuple(float(v) for v in prefix)
    for v in vals:
        if not math.isfinite(v):
            raise ValueError("prefix values must be finite")
    if not math.isfinite(tail):
        raise ValueError("tail must be finite")
    t = float(tail)
    k = len(vals)

    def rule(m: int) -> float:
        return vals[m - 1] if m <= k else t

    return Sequence(
        name=f"explicit_list(len={k}, tail={t})",
        params={"prefix": vals, "tail": t},
        rule=rule,
    )


def harmonic_like(exponent: float) -> Sequence:
    """x_m = m ** (-a) for a > 0."""
    if not (exponent > 0 and math.isfinite(exponent)):
        raise ValueError(f"exponent must be a positive finite real, got {exponent!r}")
    a = float(exponent)

    def rule(m: int) -> float:
        return m ** (-a)

    def batch(M: int) -> list[float]:
        return [math.nan] + [m ** (-a) for m in range(1, M + 1)]

    return Sequence(
        name=f"harmonic_like(a={a})",
        params={"exponent": a},
        rule=rule,
        batch_rule=batch,
    )


def constant(value: float) -> Sequence:
    """x_m = value for every m (residuals vanish for every witness)."""
    if not math.isfinite(value):
        raise ValueError("value must be finite")
    v = float(value)
    return Sequence(
        name=f"constant({v})",
        params={"value": v},
        rule=lambda m: v,
        batch_rule=lambda M: [math.nan] + [v] * M,
    )


def linear_combination(alpha: float, x: Sequence, beta: float, y: Sequence) -> Sequence:
    """alpha*x + beta*y, used by the linearity check."""
    a, b = float(alpha), float(beta)
    xr, yr = x.rule, y.rule

    def rule(m: int) -> float:
        return a * xr(m) + b * yr(m)

    def batch(M: int) -> list[float]:
        xs = x.prefix(M)
        ys = y.prefix(M)
        return [math.nan] + [a * xs[m] + b * ys[m] for m in range(1, M + 1)]

    return Sequence(
        name=f"({a})*{x.name} + ({b})*{y.name}",
        params={"alpha": a, "beta": b, "x": x.params, "y": y.params},
        rule=rule,
        batch_rule=batch,
    )


_FAMILIES = {
    "gcd_class",
    "perturbed_gcd_class",
    "block_spike",
    "explicit_list",
    "harmonic_like",
    "constant",
}


def make_sequence(family: str, params: dict) -> Sequence:
    """Construct a sequence from a family tag and a parameter record."""
    if family == "gcd_class":
        return gcd_class(DivisorTable(params["n0"], params["table"]))
    if family == "perturbed_gcd_class":
        return perturbed_gcd_class(DivisorTable(params["n0"], params["table"]), params["decay"])
    if family == "block_spike":
        return block_spike(params["theta"], params["height"], params["spikes_per_block"])
    if family == "explicit_list":
        return explicit_list(params["prefix"], params.get("tail", 0.0))
    if family == "harmonic_like":
        return harmonic_like(params["exponent"])
    if family == "constant":
        return constant(params["value"])
    raise ValueError(f"unknown sequence family {family!r}; known: {sorted(_FAMILIES)}")


def failing_at(index: int, base: Sequence | None = None) -> Sequence:
    """A sequence whose rule raises at one index (for error-path tests)."""
    inner = base if base is not None else constant(0.0)

    def rule(m: int) -> float:
        if m == index:
            raise EvaluationError(m, "deliberate failure")
        return inner.rule(m)

    return Sequence(name=f"failing_at({index})", params={"index": index}, rule=rule)
