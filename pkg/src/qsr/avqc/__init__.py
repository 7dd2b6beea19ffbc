"""Arbitrarily varying channels: sequences, robustification, elimination, LPs, jammers."""

from qsr.avqc.chernoff import ChernoffReport, SamplerBoundsError, chernoff_bound, coin_flip_exceedance, matrix_chernoff_mc
from qsr.avqc.jammer import (
    JammerWorstCase,
    PermutationBoundReport,
    QuantumJammerChannel,
    jammer_effect_operator,
    jammer_worst_case,
    performance_under_jammer,
    permutation_bound_check,
)
from qsr.avqc.lp import LpResult, solve_feasibility
from qsr.avqc.sequences import (
    AvqcSpec,
    ClassicalReduction,
    EliminationResult,
    RandomCetCode,
    RobustReport,
    WorstCase,
    classical_prefix_code,
    classical_reduction,
    eliminate,
    performance_table,
    robustify,
    robustlemma_check,
    worst_case_performance,
)
from qsr.avqc.symmetrize import SymmetrizabilityInstance, SymmetrizabilityResult, symmetrizability_lp

__all__ = [
    "AvqcSpec",
    "ChernoffReport",
    "ClassicalReduction",
    "EliminationResult",
    "JammerWorstCase",
    "LpResult",
    "PermutationBoundReport",
    "QuantumJammerChannel",
    "RandomCetCode",
    "RobustReport",
    "SamplerBoundsError",
    "SymmetrizabilityInstance",
    "SymmetrizabilityResult",
    "WorstCase",
    "chernoff_bound",
    "classical_prefix_code",
    "classical_reduction",
    "coin_flip_exceedance",
    "eliminate",
    "jammer_effect_operator",
    "jammer_worst_case",
    "matrix_chernoff_mc",
    "performance_table",
    "performance_under_jammer",
    "permutation_bound_check",
    "robustify",
    "robustlemma_check",
    "solve_feasibility",
    "symmetrizability_lp",
    "worst_case_performance",
]
