"""Executable finite-scale forms of the proof-chain inequalities.

Every check tests the inequality at each finite block index r (or partial
horizon t); limit statements are untestable and would make the suite
vacuous.  A check passes when all of its slack values clear -SLACK_TOL on
O(1)-normalized data.  Where a stated proof step is not a valid finite
inequality as written, the check substitutes the sound finite core and
says so in its details.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left
from dataclasses import dataclass, field, replace
from itertools import accumulate

from . import oracle
from .analysis import (
    CONSISTENT,
    INCONSISTENT,
    _residual_prefix,
    _verdict_series,
    block_means,
    cesaro_means,
    modulus_block_means,
)
from .core import _check_positive_int
from .lacunary import LacunaryPartition, RefinementMap, ratio_stats, refine
from .modulus import Modulus, bounded, identity, iterate, power
from .sequences import (
    DivisorTable,
    Sequence,
    block_spike,
    constant,
    gcd_class,
    harmonic_like,
    linear_combination,
    perturbed_gcd_class,
)

SLACK_TOL = 1e-9
IDENTITY_REL_TOL = 1e-12

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_NOT_MET = "hypothesis_not_met"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    slacks: tuple[float, ...]
    worst_index: int | None
    worst_slack: float | None
    details: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "slacks": list(self.slacks),
            "worst_index": self.worst_index,
            "worst_slack": self.worst_slack,
            "details": {
                k: (list(v) if isinstance(v, tuple) else v)
                for k, v in self.details.items()
            },
        }


def _result(name: str, slacks: list[float], details: dict | None = None,
            extra_ok: bool = True, tol: float = SLACK_TOL) -> CheckResult:
    worst_i, worst = None, None
    for i, s in enumerate(slacks, start=1):
        if worst is None or s < worst:
            worst_i, worst = i, s
    ok = extra_ok and (worst is None or worst >= -tol)
    return CheckResult(
        name=name,
        status=PASS if ok else FAIL,
        slacks=tuple(slacks),
        worst_index=worst_i,
        worst_slack=worst,
        details=details or {},
    )


# --- slack kernels (pure; reused by the oracle-agreement and corruption tests)


def linearity_slacks(tau_combo, tau_x, tau_y, alpha: float, beta: float) -> list[float]:
    a, b = abs(alpha), abs(beta)
    return [a * tx + b * ty - tc for tc, tx, ty in zip(tau_combo, tau_x, tau_y)]


def ac_inclusion_slacks(tau, eps: float) -> list[float]:
    return [eps - t for t in tau]


def refinement_gaps(rmap: RefinementMap, tau_parent, tau_child):
    """Per parent block: (relative identity gap, convex max-bound slack)."""
    gaps, convex = [], []
    for r in range(1, rmap.parent.R + 1):
        lhs = rmap.parent.h[r - 1] * tau_parent[r - 1]
        rhs = sum(rmap.child.h[t - 1] * tau_child[t - 1] for t in rmap.groups[r - 1])
        gaps.append(oracle.relative_gap(lhs, rhs))
        convex.append(max(tau_child[t - 1] for t in rmap.groups[r - 1]) - tau_parent[r - 1])
    return gaps, convex


def liminf_slacks(theta: LacunaryPartition, tau, sigma) -> list[float]:
    """sigma_{k_r} - (h_r/k_r) * tau_r per block; the coefficient is (q_r-1)/q_r."""
    out = []
    for r in range(1, theta.R + 1):
        coef = theta.h[r - 1] / theta.points[r]
        out.append(sigma[theta.points[r] - 1] - coef * tau[r - 1])
    return out


def modulus_split_slacks(tau, tau_f, f: Modulus, delta: float):
    """(upper slacks, lower slacks or None) for the small/large split bound."""
    fd = f.eval(delta)
    f1 = f.eval(1.0)
    upper = [fd + 2.0 * f1 * t / delta - tf for t, tf in zip(tau, tau_f)]
    lower = None
    if f.declared_beta is not None:
        b = f.declared_beta
        lower = [tf - b * t for t, tf in zip(tau, tau_f)]
    return upper, lower


# --- the checks


def check_linearity(x: Sequence, y: Sequence, alpha: float, beta: float,
                    theta: LacunaryPartition, n: int) -> CheckResult:
    """tau_r(ax+by) <= |a| tau_r(x) + |b| tau_r(y) for every r.

    Tighter than bounding |a|, |b| by integers; follows from the triangle
    inequality plus absolute homogeneity.
    """
    combo = linear_combination(alpha, x, beta, y)
    tau_c = block_means(combo, theta, n).tau
    tau_x = block_means(x, theta, n).tau
    tau_y = block_means(y, theta, n).tau
    slacks = linearity_slacks(tau_c, tau_x, tau_y, alpha, beta)
    return _result("linearity", slacks,
                   {"alpha": alpha, "beta": beta, "witness_n": n})


def check_ac_inclusion(x: Sequence, eps: float, n: int,
                       theta: LacunaryPartition, M: int) -> CheckResult:
    """sup residual < eps on 1..M forces every tau_r < eps (mean of small terms)."""
    if M < theta.points[-1]:
        raise ValueError(f"M={M} must reach k_R={theta.points[-1]}")
    X = x.prefix(M)
    res = _residual_prefix(X, n, M)
    sup = max(res)
    if not sup < eps:
        worst_m = res.index(sup) + 1
        return CheckResult(
            name="ac_inclusion",
            status=HYPOTHESIS_NOT_MET,
            slacks=(),
            worst_index=worst_m,
            worst_slack=eps - sup,
            details={"sup_residual": sup, "eps": eps},
        )
    tau = block_means(x, theta, n).tau
    slacks = ac_inclusion_slacks(tau, eps)
    strict = all(t < eps for t in tau)
    return _result("ac_inclusion", slacks,
                   {"sup_residual": sup, "eps": eps}, extra_ok=strict)


def check_refinement(x: Sequence, rmap: RefinementMap, n: int) -> CheckResult:
    """Exact block-sum decomposition h_r tau_r = sum_t h' tau', plus tau_r <= max_t tau'.

    The step comparing a parent mean against a single child mean is not a
    valid inequality in general; the pair above is the sound finite core.
    """
    tau_parent = block_means(x, rmap.parent, n).tau
    tau_child = block_means(x, rmap.child, n).tau
    gaps, convex = refinement_gaps(rmap, tau_parent, tau_child)
    identity_ok = all(g <= IDENTITY_REL_TOL for g in gaps)
    return _result(
        "refinement",
        convex,
        {
            "identity_rel_gaps": tuple(gaps),
            "note": "mean-vs-single-subblock step replaced by sound finite form",
        },
        extra_ok=identity_ok,
    )


def check_liminf_inequality(x: Sequence, theta: LacunaryPartition, n: int) -> CheckResult:
    """sigma_{k_r} >= (1 - 1/q_r) tau_r; with min q_r >= 1+delta also the
    flat constant delta/(1+delta)."""
    tau = block_means(x, theta, n).tau
    sigma = cesaro_means(x, n, theta.points[-1]).sigma
    slacks = liminf_slacks(theta, tau, sigma)
    details: dict = {"witness_n": n}
    extra_ok = True
    if theta.R >= 2:
        stats = ratio_stats(theta)
        if stats.min_q > 1:
            delta = stats.min_q - 1
            coef = float(delta / (1 + delta))
            flat = [sigma[theta.points[r] - 1] - coef * tau[r - 1]
                    for r in range(1, theta.R + 1)]
            details["flat_constant"] = coef
            details["flat_slacks"] = tuple(flat)
            extra_ok = min(flat) >= -SLACK_TOL
    return _result("liminf_inequality", slacks, details, extra_ok=extra_ok)


def check_partial_sum_decomposition(x: Sequence, theta: LacunaryPartition,
                                    n: int) -> CheckResult:
    """Exact identity sum_{k_0 < m <= k_r} residual = sum_{i<=r} h_i tau_i,
    plus the within-block bound sigma_t <= S(k_r)/k_{r-1} for t in [k_{r-1}, k_r]."""
    kR = theta.points[-1]
    X = x.prefix(kR)
    res = _residual_prefix(X, n, kR)
    S = [0.0] + list(accumulate(res))  # S[t] = sum of residuals m <= t
    tau = block_means(x, theta, n).tau

    gaps = []
    rhs_running = 0.0
    k0 = theta.points[0]
    for r in range(1, theta.R + 1):
        rhs_running += theta.h[r - 1] * tau[r - 1]
        lhs = S[theta.points[r]] - S[k0]
        gaps.append(oracle.relative_gap(lhs, rhs_running))
    identity_ok = all(g <= SLACK_TOL for g in gaps)

    bound_slacks = []
    for r in range(1, theta.R + 1):
        lo, hi = theta.points[r - 1], theta.points[r]
        cap = S[hi] / lo
        worst = math.inf
        for t in range(lo, hi + 1):
            worst = min(worst, cap - S[t] / t)
        bound_slacks.append(worst)
    return _result(
        "partial_sum_decomposition",
        bound_slacks,
        {"identity_rel_gaps": tuple(gaps)},
        extra_ok=identity_ok,
    )


def check_modulus_split(x: Sequence, theta: LacunaryPartition, f: Modulus,
                        n: int, delta: float) -> CheckResult:
    """tau_r^f <= f(delta) + 2 f(1) tau_r / delta; and tau_r^f >= beta tau_r
    when f has a declared slope at infinity.

    The epsilon of the split is instantiated as f(delta): f is increasing,
    so f(delta) is the sup of f over [0, delta].
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    tau = block_means(x, theta, n).tau
    tau_f = modulus_block_means(x, theta, f, n).tau
    upper, lower = modulus_split_slacks(tau, tau_f, f, delta)
    details: dict = {"modulus": f.name, "delta": delta}
    extra_ok = True
    if lower is not None:
        details["beta"] = f.declared_beta
        details["lower_slacks"] = tuple(lower)
        extra_ok = min(lower) >= -SLACK_TOL
    return _result("modulus_split", upper, details, extra_ok=extra_ok)


# --- separating-sequence search


@dataclass(frozen=True)
class SeparatorEvidence:
    target: str
    sequence: Sequence
    height: float
    spikes: tuple[int, ...]
    tau: tuple[float, ...]
    sigma: tuple[float, ...]
    theta_tail_stat: float
    sigma_tail_stat: float
    factor: float
    verdict_theta: str
    verdict_sigma: str
    iterations_used: int
    oracle_max_rel_gap: float


def _spike_tail_stats(theta: LacunaryPartition, height: float, spikes: list[int],
                      block_window: int, t_window: int):
    """Closed-form tail statistics for an end-placed block-spike sequence.

    With witness n = 1 and zero baseline the residual equals the spike
    height at spiked indices and 0 elsewhere, so tau_r = s_r H / h_r and
    the sigma tail is H * (#spikes <= t) / t.
    """
    pts = theta.points
    T = pts[-1]
    tau = [s * height / h for s, h in zip(spikes, theta.h)]
    cum = [0]
    for s in spikes:
        cum.append(cum[-1] + s)
    sig = []
    for t in range(T - t_window + 1, T + 1):
        r = bisect_left(pts, t) if t > pts[0] else 0
        if r == 0:
            sig.append(0.0)
            continue
        cnt = cum[r - 1] + max(0, spikes[r - 1] - (pts[r] - t))
        sig.append(height * cnt / t)
    theta_stat = max(tau[-block_window:])
    sigma_stat = max(sig)
    return tau, sig, theta_stat, sigma_stat


def _separator_score(target: str, theta_stat: float, sigma_stat: float,
                     v_theta: str, v_sigma: str, tol: float):
    """(feasible, factor) for a candidate under the target's verdict pattern."""
    if target == "theta_not_sigma":
        if v_theta != CONSISTENT or v_sigma != INCONSISTENT or theta_stat <= 0:
            return False, 0.0
        return True, sigma_stat / theta_stat
    if v_sigma != CONSISTENT or v_theta != INCONSISTENT or sigma_stat <= 0:
        return False, 0.0
    return True, theta_stat / sigma_stat


def search_separator(theta: LacunaryPartition, target: str, budget: int, *,
                     tol: float = 1e-3, factor_min: float = 10.0,
                     block_window: int = 1, t_window: int = 8,
                     seed: int = 0) -> SeparatorEvidence | None:
    """Best-effort hunt for a block-spike sequence whose two tail verdicts differ.

    Coordinate search over (height, spikes-per-block); a candidate wins when
    the target's verdict pattern holds and the two tail statistics differ by
    at least factor_min.  Returning None means "not found within budget",
    never that the spaces agree.
    """
    if target not in ("theta_not_sigma", "sigma_not_theta"):
        raise ValueError(f"unknown target {target!r}")
    _check_positive_int(budget, "budget")
    R = theta.R
    h = theta.h
    block_window = min(block_window, R)
    t_window = min(t_window, theta.points[-1])
    rng = random.Random(seed)
    heights = (0.25, 0.5, 1.0, 2.0, 4.0)

    def seeds():
        if target == "theta_not_sigma":
            tail_spikes = min(t_window, h[-1])
            for depth in range(R - 1, 0, -1):
                base = [h[i] if i < depth else 0 for i in range(R)]
                base[-1] = tail_spikes
                for H in heights:
                    yield H, list(base)
        else:
            for frac in (1.0, 0.5, 0.25, 0.125):
                s_last = max(1, int(h[-1] * frac))
                for H in heights:
                    base = [0] * R
                    base[-1] = s_last
                    yield H, base

    def random_candidate():
        H = rng.choice(heights) * rng.choice((0.5, 1.0, 2.0))
        s = [rng.randint(0, h[i]) for i in range(R)]
        return H, s

    used = 0
    best = None  # (factor, H, spikes)
    pool = seeds()
    while used < budget:
        try:
            H, s = next(pool)
        except StopIteration:
            H, s = random_candidate()
        used += 1
        tau, sig, t_stat, s_stat = _spike_tail_stats(theta, H, s, block_window, t_window)
        v_t = _verdict_series(tau, tol, block_window)
        v_s = _verdict_series(sig, tol, t_window)
        feasible, factor = _separator_score(target, t_stat, s_stat, v_t, v_s, tol)
        if feasible and factor >= factor_min:
            best = (factor, H, list(s))
            break
    if best is None:
        return None

    # Rebuild through the main path and validate against the oracle.
    _, H, s = best
    x = block_spike(theta, H, s)
    bm = block_means(x, theta, 1)
    cm = cesaro_means(x, 1, theta.points[-1])
    theta_stat = max(bm.tau[-block_window:])
    sigma_stat = max(cm.sigma[-t_window:])
    v_t = _verdict_series(bm.tau, tol, block_window)
    v_s = _verdict_series(cm.sigma, tol, t_window)
    feasible, factor = _separator_score(target, theta_stat, sigma_stat, v_t, v_s, tol)
    if not feasible or factor < factor_min:
        return None
    gaps = [oracle.relative_gap(a, b)
            for a, b in zip(bm.tau, oracle.block_means(x, theta, 1))]
    for t in range(theta.points[-1] - t_window + 1, theta.points[-1] + 1):
        gaps.append(oracle.relative_gap(cm.sigma[t - 1], oracle.cesaro_mean_at(x, 1, t)))
    return SeparatorEvidence(
        target=target,
        sequence=x,
        height=H,
        spikes=tuple(s),
        tau=bm.tau,
        sigma=cm.sigma,
        theta_tail_stat=theta_stat,
        sigma_tail_stat=sigma_stat,
        factor=factor,
        verdict_theta=v_t,
        verdict_sigma=v_s,
        iterations_used=used,
        oracle_max_rel_gap=max(gaps),
    )


# --- deterministic check battery (CLI `theorems` subcommand)

SUITE_NAMES = ("linearity", "ac_inclusion", "refinement", "liminf",
               "decomposition", "modulus_split")


def _tagged(res: CheckResult, label: str) -> CheckResult:
    return replace(res, name=f"{res.name}[{label}]")


def standard_suite(theta: LacunaryPartition, seed: int = 0,
                   suites=("all",)) -> list[CheckResult]:
    """Run every check on a deterministic fixture battery over theta.

    The battery is replayable from (theta, seed) alone; suites filters by
    check name, "all" keeps everything.
    """
    rng = random.Random(seed)
    want = set(suites)
    keep = lambda name: "all" in want or name in want
    kR = theta.points[-1]

    table = DivisorTable(6, {1: 0.1, 2: 0.2, 3: 0.3, 6: 0.6})
    decay = 1e-3
    fixtures = [
        (gcd_class(table), 6),
        (perturbed_gcd_class(table, decay), 6),
        (harmonic_like(1.0), 1),
        (block_spike(theta, 1.0, 1), 1),
        (constant(0.7), 3),
    ]
    results: list[CheckResult] = []

    if keep("linearity"):
        for i in range(20):
            x, _ = fixtures[rng.randrange(len(fixtures))]
            y, _ = fixtures[rng.randrange(len(fixtures))]
            alpha = rng.uniform(-10, 10)
            beta = rng.uniform(-10, 10)
            n = rng.randint(1, 12)
            results.append(_tagged(check_linearity(x, y, alpha, beta, theta, n),
                                   f"draw={i}"))

    if keep("ac_inclusion"):
        pert, n = fixtures[1]
        results.append(_tagged(check_ac_inclusion(pert, decay, n, theta, kR),
                               pert.name))

    if keep("refinement"):
        candidates = sorted(set(range(theta.points[0] + 1, kR + 1)) - set(theta.points))
        for i in range(5):
            extra = rng.sample(candidates, k=min(3, len(candidates)))
            rmap = refine(theta, extra)
            x, n = fixtures[rng.randrange(len(fixtures))]
            results.append(_tagged(check_refinement(x, rmap, n), f"draw={i}"))

    if keep("liminf"):
        for x, n in fixtures:
            results.append(_tagged(check_liminf_inequality(x, theta, n), x.name))

    if keep("decomposition"):
        for x, n in fixtures:
            results.append(_tagged(check_partial_sum_decomposition(x, theta, n),
                                   x.name))

    if keep("modulus_split"):
        moduli = (identity(), power(0.5), bounded(), iterate(bounded(), 2))
        for x, n in fixtures:
            for f in moduli:
                for delta in (0.5, 0.1):
                    results.append(_tagged(
                        check_modulus_split(x, theta, f, n, delta),
                        f"{x.name}|{f.name}|delta={delta}"))

    return results
