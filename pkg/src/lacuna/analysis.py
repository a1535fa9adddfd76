"""Finite-horizon functionals for the four residual-mean spaces.

Implements the witness search (sup residual < eps for some n), per-block
means tau_r, Cesaro means sigma_t, modulus-transformed block means, and
the three-valued verdicts.  A finite horizon can never prove a limit, so
verdicts say "consistent", never "member".

Summation is plain left-to-right within each block (the builtin sum), and
that order is the contract: any internal parallelism must reproduce it
bitwise.  Cross-block combination is order-free (separate output slots).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import accumulate

from .core import _check_positive_int
from .lacunary import LacunaryPartition
from .modulus import Modulus
from .sequences import Sequence

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
INCONCLUSIVE = "inconclusive"

SPACE_AC = "AC"
SPACE_THETA = "AC_theta"
SPACE_SIGMA = "AC_sigma1"
SPACE_THETA_F = "AC_theta_f"


def thread_cap() -> int:
    """Parallelism cap from LACUNA_THREADS (default 1)."""
    raw = os.environ.get("LACUNA_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        raise ValueError(f"LACUNA_THREADS must be a positive integer, got {raw!r}")
    return cap


def _residual_prefix(X: list[float], n: int, upto: int) -> list[float]:
    """[|x_m - x_<m,n>|] for m = 1..upto, from a 1-indexed prefix X."""
    g = math.gcd
    return [abs(X[m] - X[g(m, n)]) for m in range(1, upto + 1)]


def _block_sums(res: list[float], theta: LacunaryPartition) -> list[float]:
    """Left-to-right sum of residuals over each block I_r.

    res is 0-indexed by m-1 and must reach k_R.  Blocks occupy disjoint
    slots, so computing them on several threads is scheduling-independent.
    """
    pts = theta.points
    spans = [(pts[r - 1], pts[r]) for r in range(1, theta.R + 1)]
    cap = thread_cap()
    if cap > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            return list(pool.map(lambda ab: sum(res[ab[0]:ab[1]]), spans))
    return [sum(res[a:b]) for a, b in spans]


@dataclass(frozen=True)
class BlockMeans:
    theta: LacunaryPartition
    witness_n: int
    tau: tuple[float, ...]
    modulus_name: str | None = None

    @property
    def values(self) -> tuple[float, ...]:
        return self.tau


@dataclass(frozen=True)
class CesaroMeans:
    witness_n: int
    sigma: tuple[float, ...]

    @property
    def values(self) -> tuple[float, ...]:
        return self.sigma


def block_means(x: Sequence, theta: LacunaryPartition, n: int) -> BlockMeans:
    """tau_r = (1/h_r) * sum over I_r of |x_m - x_<m,n>|."""
    _check_positive_int(n, "n")
    X = x.prefix(theta.points[-1])
    res = _residual_prefix(X, n, theta.points[-1])
    sums = _block_sums(res, theta)
    tau = tuple(s / h for s, h in zip(sums, theta.h))
    return BlockMeans(theta=theta, witness_n=n, tau=tau)


def modulus_block_means(
    x: Sequence, theta: LacunaryPartition, f: Modulus, n: int
) -> BlockMeans:
    """tau_r^f = (1/h_r) * sum over I_r of f(|x_m - x_<m,n>|)."""
    _check_positive_int(n, "n")
    X = x.prefix(theta.points[-1])
    res = _residual_prefix(X, n, theta.points[-1])
    rule = f.rule
    fres = [rule(v) for v in res]
    sums = _block_sums(fres, theta)
    tau = tuple(s / h for s, h in zip(sums, theta.h))
    return BlockMeans(theta=theta, witness_n=n, tau=tau, modulus_name=f.name)


def cesaro_means(x: Sequence, n: int, T: int) -> CesaroMeans:
    """sigma_t = (1/t) * sum over m <= t of |x_m - x_<m,n>|, t = 1..T."""
    _check_positive_int(n, "n")
    _check_positive_int(T, "T")
    X = x.prefix(T)
    res = _residual_prefix(X, n, T)
    sigma = tuple(s / t for t, s in enumerate(accumulate(res), start=1))
    return CesaroMeans(witness_n=n, sigma=sigma)


@dataclass(frozen=True)
class AcWitness:
    n: int
    sup_residual: float


def ac_witness(x: Sequence, eps: float, n_max: int, M: int) -> AcWitness | None:
    """Smallest n <= n_max with sup residual < eps over m <= M, if any.

    <m,n> only takes divisor-of-n values, so each candidate n touches a
    handful of back-reference values.
    """
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps!r}")
    _check_positive_int(n_max, "n_max")
    _check_positive_int(M, "M")
    X = x.prefix(M)
    g = math.gcd
    for n in range(1, n_max + 1):
        sup = 0.0
        ok = True
        for m in range(1, M + 1):
            r = abs(X[m] - X[g(m, n)])
            if r >= eps:
                ok = False
                break
            if r > sup:
                sup = r
        if ok:
            return AcWitness(n=n, sup_residual=sup)
    return None


def _verdict_series(series, tol: float, window: int) -> str:
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    _check_positive_int(window, "window")
    if window > len(series):
        raise ValueError(f"window {window} exceeds series length {len(series)}")
    tail = list(series[-window:])
    if max(tail) < tol:
        return CONSISTENT
    nondecreasing = all(b >= a for a, b in zip(tail, tail[1:]))
    if min(tail) > tol and nondecreasing:
        return INCONSISTENT
    return INCONCLUSIVE


def verdict(means: BlockMeans | CesaroMeans, tol: float, window: int) -> str:
    """Three-valued call on the last `window` mean values.

    consistent: the whole tail is below tol.  inconsistent: the whole tail
    sits above tol and is nondecreasing (a monotone lower bound).  Anything
    else is inconclusive.
    """
    return _verdict_series(means.values, tol, window)


@dataclass(frozen=True)
class AnalysisConfig:
    eps: float = 1e-6
    n_max: int = 16
    M: int = 0  # 0 means: use k_R
    T: int = 0  # 0 means: use k_R
    tol: float = 1e-3
    window: int = 3

    def resolved(self, theta: LacunaryPartition) -> "AnalysisConfig":
        kR = theta.points[-1]
        M = self.M or kR
        T = self.T or kR
        window = min(self.window, theta.R)
        cfg = AnalysisConfig(eps=self.eps, n_max=self.n_max, M=M, T=T,
                             tol=self.tol, window=window)
        cfg.validate(theta)
        return cfg

    def validate(self, theta: LacunaryPartition) -> None:
        kR = theta.points[-1]
        if self.M < kR:
            raise ValueError(f"M={self.M} must be >= k_R={kR}")
        if self.T < kR:
            raise ValueError(f"T={self.T} must be >= k_R={kR}")
        if not 1 <= self.window <= theta.R:
            raise ValueError(f"window={self.window} must lie in 1..R={theta.R}")
        if not self.eps > 0 or not self.tol > 0:
            raise ValueError("eps and tol must be positive")
        _check_positive_int(self.n_max, "n_max")


@dataclass(frozen=True)
class SpaceReport:
    space: str
    witness_n: int | None
    tail_stat: float
    verdict: str


@dataclass(frozen=True)
class ConvergenceReport:
    config: dict
    spaces: tuple[SpaceReport, ...]
    means: dict = field(default_factory=dict, compare=False)

    def entry(self, space: str) -> SpaceReport:
        for s in self.spaces:
            if s.space == space:
                return s
        raise KeyError(space)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "spaces": [
                {
                    "tag": s.space,
                    "witness_n": s.witness_n,
                    "tail_stat": s.tail_stat,
                    "verdict": s.verdict,
                }
                for s in self.spaces
            ],
        }


def classify(
    x: Sequence, theta: LacunaryPartition, f: Modulus, config: AnalysisConfig
) -> ConvergenceReport:
    """One verdict per space, sharing a single witness n across the mean spaces.

    The shared witness is the scan minimizer of the block-mean tail
    statistic (ties to the smaller n); the AC entry keeps its own
    smallest-sup witness.
    """
    cfg = config.resolved(theta)
    kR = theta.points[-1]
    horizon = max(cfg.M, cfg.T)
    X = x.prefix(horizon)
    g = math.gcd

    # AC: smallest n whose sup residual beats eps.
    wit = None
    per_n_res_tail: list[list[float]] = []
    tail_lo = cfg.M - cfg.window + 1
    for n in range(1, cfg.n_max + 1):
        sup = 0.0
        ok = True
        for m in range(1, cfg.M + 1):
            r = abs(X[m] - X[g(m, n)])
            if r >= cfg.eps:
                ok = False
                break
            if r > sup:
                sup = r
        if ok and wit is None:
            wit = AcWitness(n=n, sup_residual=sup)
        per_n_res_tail.append([abs(X[m] - X[g(m, n)]) for m in range(tail_lo, cfg.M + 1)])
    if wit is not None:
        ac_entry = SpaceReport(SPACE_AC, wit.n, wit.sup_residual, CONSISTENT)
    else:
        # Monotone lower bound: the future minimum over every scanned n
        # exceeds eps on the whole tail, or we cannot tell.
        floor = min(min(col) for col in zip(*per_n_res_tail))
        v = INCONSISTENT if floor > cfg.eps else INCONCLUSIVE
        ac_entry = SpaceReport(SPACE_AC, None, floor, v)

    # Shared witness n for the mean spaces: minimize the tau tail statistic.
    best_n, best_tail, best_tau = None, math.inf, None
    for n in range(1, cfg.n_max + 1):
        res = _residual_prefix(X, n, kR)
        sums = _block_sums(res, theta)
        tau = [s / h for s, h in zip(sums, theta.h)]
        tail = max(tau[-cfg.window:])
        if tail < best_tail:
            best_n, best_tail, best_tau = n, tail, tau
    assert best_n is not None and best_tau is not None

    res_T = _residual_prefix(X, best_n, cfg.T)
    sigma = [s / t for t, s in enumerate(accumulate(res_T), start=1)]
    rule = f.rule
    fres = [rule(v) for v in res_T[:kR]]
    fsums = _block_sums(fres, theta)
    tau_f = [s / h for s, h in zip(fsums, theta.h)]

    sigma_tail = max(sigma[-cfg.window:])
    tau_f_tail = max(tau_f[-cfg.window:])
    spaces = (
        ac_entry,
        SpaceReport(SPACE_THETA, best_n, best_tail,
                    _verdict_series(best_tau, cfg.tol, cfg.window)),
        SpaceReport(SPACE_SIGMA, best_n, sigma_tail,
                    _verdict_series(sigma, cfg.tol, cfg.window)),
        SpaceReport(SPACE_THETA_F, best_n, tau_f_tail,
                    _verdict_series(tau_f, cfg.tol, cfg.window)),
    )
    config_echo = {
        "eps": cfg.eps,
        "n_max": cfg.n_max,
        "M": cfg.M,
        "T": cfg.T,
        "tol": cfg.tol,
        "window": cfg.window,
        "theta_points": list(theta.points),
        "modulus": f.name,
        "sequence": x.name,
    }
    means = {
        "tau": tuple(best_tau),
        "sigma": tuple(sigma),
        "tau_f": tuple(tau_f),
    }
    return ConvergenceReport(config=config_echo, spaces=spaces, means=means)
