"""Statevector simulation of phase, amplitude, overlap and expectation
estimation with confidence levels and exact resource accounting."""

from .amp_overlap import (
    AmplitudeEstimate,
    OverlapEstimate,
    amp_estimate,
    hemisphere_distance,
    hemisphere_lift,
    overlap_estimate,
    reconstruct_y,
)
from .baseline import SampledEstimate, direct_sample_mean, one_ancilla_overlap
from .confidence import (
    ConfidenceBudget,
    ResourceLimitError,
    failure_bound,
    hoeffding_bound,
    select_r,
    stage1_repetitions,
)
from .eea import (
    EstimateResult,
    InfeasibleError,
    StageIIParams,
    TailModel,
    eea_full,
    series_coefficients,
    solve_stage2,
    stage1,
    stage1_log,
    stage2,
    stage2_prime,
    tail_F,
    tail_G,
    tail_Ginv,
)
from .ledger import ResourceLedger
from .oracles import EvolutionOracle, StatePrep, exp_at, grover_reflection
from .pea import PhaseEstimate, pea_modified, pea_original, pea_parallel_model
from .statevec import DenseUnitary, InvalidOperandError, StateVector

__version__ = "0.1.0"

__all__ = [
    "AmplitudeEstimate", "ConfidenceBudget", "DenseUnitary", "EstimateResult", "EvolutionOracle",
    "InfeasibleError", "InvalidOperandError", "OverlapEstimate", "PhaseEstimate", "ResourceLedger",
    "ResourceLimitError", "SampledEstimate", "StageIIParams", "StatePrep", "StateVector", "TailModel",
    "amp_estimate", "direct_sample_mean", "eea_full", "exp_at", "failure_bound", "grover_reflection",
    "hemisphere_distance", "hemisphere_lift", "hoeffding_bound", "one_ancilla_overlap",
    "overlap_estimate", "pea_modified", "pea_original", "pea_parallel_model", "reconstruct_y",
    "select_r", "series_coefficients", "solve_stage2", "stage1", "stage1_log", "stage1_repetitions",
    "stage2", "stage2_prime", "tail_F", "tail_G", "tail_Ginv",
]
