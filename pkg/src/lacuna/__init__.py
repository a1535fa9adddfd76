"""Lacunary arithmetic convergence toolkit.

Gcd-indexed residual streams, block / Cesaro / modulus-transformed means,
three-valued finite-horizon verdicts, executable proof-chain inequality
checks, and a small text DSL naming sequences, partitions, and moduli.
"""

from .analysis import (
    AcWitness,
    AnalysisConfig,
    BlockMeans,
    CesaroMeans,
    ConvergenceReport,
    SpaceReport,
    ac_witness,
    block_means,
    cesaro_means,
    classify,
    modulus_block_means,
    verdict,
)
from .core import EvaluationError, ResidualStream, arith_index, divisors, gcd, residuals
from .dsl import LoweringError, ParseError, lower, parse, parse_and_lower, unparse
from .lacunary import (
    LacunaryPartition,
    RatioStats,
    RefinementMap,
    from_points,
    geometric,
    ratio_stats,
    refine,
)
from .modulus import (
    AxiomReport,
    BetaEstimate,
    FisherResult,
    Modulus,
    beta_estimate,
    bounded,
    builtin,
    compose,
    default_grid,
    fisher_check,
    identity,
    iterate,
    log_grid,
    power,
    sum_of,
    verify_axioms,
)
from .sequences import (
    DivisorTable,
    Sequence,
    block_spike,
    constant,
    explicit_list,
    gcd_class,
    harmonic_like,
    linear_combination,
    make_sequence,
    perturbed_gcd_class,
)
from .theorems import (
    CheckResult,
    SeparatorEvidence,
    check_ac_inclusion,
    check_linearity,
    check_liminf_inequality,
    check_modulus_split,
    check_partial_sum_decomposition,
    check_refinement,
    search_separator,
    standard_suite,
)

__version__ = "0.1.0"
