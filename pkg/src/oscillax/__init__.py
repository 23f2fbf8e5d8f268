"""Sieves, residues, and oscillation bounds for prime-factor-weighted sums.

The package computes partial sums of (-1)^(n - Omega(n)) / n^alpha and
relatives (omega-signed, (-2)^Omega weighted, Kronecker twisted, and
divisibility counting variants) by segmented sieve with exact
accumulators, derives the analytic centers and residues governing their
oscillation, turns zero tables into conditional liminf/limsup bounds,
and evaluates truncated explicit-formula estimates at heights far
beyond sieve range.  The `oscillax` CLI fronts all of it.
"""

from .arith import (
    Family,
    OracleLimitError,
    SumSpec,
    big_omega,
    factorize,
    is_prime,
    kronecker,
    liouville,
    oracle_sum,
    primes_up_to,
    small_omega,
)
from .engine import (
    DivisibilityReport,
    EngineError,
    RunResult,
    SampleSeries,
    Threshold,
    WorkUnit,
    divisibility_proportion_run,
    find_crossings,
    merge_results,
    run,
    sample_grid,
    sieve_interval,
    spec_slug,
)
from .explicit import (
    EstimateCrossing,
    EstimateSeries,
    ExplicitEstimateConfig,
    ExplicitFormulaError,
    compare_to_sieve,
    estimate,
    estimate_literal_parity,
    find_estimate_crossings,
)
from .oscillation import (
    BoundReport,
    BoundTerm,
    IndependenceAssumption,
    Kernel,
    anderson_stark_bounds,
    assumption_from_file,
    kernel_value,
    reference_targets,
    select_zeros_greedy,
)
from .residues import (
    CenterLine,
    ResidueTerm,
    core_factor_coefficients,
    core_product_value,
    omega_sign_series,
    residue_at_ordinate,
    residue_at_origin,
    two_omega_series,
)
from .sieve import BlockSieve, Track
from .table import FactorTable, TableMode, build_table
from .zeros import ZeroSet, ZeroTableError, builtin_zeros_path, load_zeros
from .zeta import AccuracyError, critical_line_values, zeta, zeta_prime

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BlockSieve",
    "BoundReport",
    "BoundTerm",
    "CenterLine",
    "DivisibilityReport",
    "EngineError",
    "EstimateCrossing",
    "EstimateSeries",
    "ExplicitEstimateConfig",
    "ExplicitFormulaError",
    "FactorTable",
    "Family",
    "IndependenceAssumption",
    "Kernel",
    "OracleLimitError",
    "ResidueTerm",
    "RunResult",
    "SampleSeries",
    "SumSpec",
    "TableMode",
    "Threshold",
    "Track",
    "WorkUnit",
    "ZeroSet",
    "ZeroTableError",
    "anderson_stark_bounds",
    "assumption_from_file",
    "big_omega",
    "builtin_zeros_path",
    "compare_to_sieve",
    "core_factor_coefficients",
    "core_product_value",
    "critical_line_values",
    "divisibility_proportion_run",
    "estimate",
    "estimate_literal_parity",
    "factorize",
    "find_crossings",
    "find_estimate_crossings",
    "is_prime",
    "kernel_value",
    "kronecker",
    "liouville",
    "load_zeros",
    "merge_results",
    "omega_sign_series",
    "oracle_sum",
    "primes_up_to",
    "reference_targets",
    "residue_at_ordinate",
    "residue_at_origin",
    "run",
    "sample_grid",
    "select_zeros_greedy",
    "sieve_interval",
    "small_omega",
    "spec_slug",
    "two_omega_series",
    "zeta",
    "zeta_prime",
]
