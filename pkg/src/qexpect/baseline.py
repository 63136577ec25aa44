"""Shot-noise-limited reference estimators.

Both estimators draw from exact outcome distributions (one statevector
evaluation, then binomial or categorical sampling), which is statistically
identical to simulating each shot and much faster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ledger import ResourceLedger, unit_prep, unit_u
from .oracles import EvolutionOracle, StatePrep
from .statevec import (
    PLUS_MINUS,
    DenseUnitary,
    InvalidOperandError,
    StateVector,
    apply,
    embed,
    outcome_probability,
    phase_gate,
)


@dataclass
class SampledEstimate:
    """Sample mean, sample count and standard error ``s / sqrt(N)``.

    For the complex overlap estimate the standard error combines both
    quadratures: ``sqrt(var_x / N_x + var_y / N_y)``.
    """

    value: complex | float
    num_samples: int
    standard_error: float
    ledger: ResourceLedger


def _check_samples(n: int) -> int:
    if not (isinstance(n, (int, np.integer)) and n >= 2):
        raise InvalidOperandError(f"num_samples must be an integer >= 2, got {n}")
    return int(n)


def _pm_mean(ones: int, n: int):
    """Mean and sample variance of ``n`` outcomes in ``{+1, -1}`` with ``ones`` of them -1."""
    if n == 0:
        return 0.0, 0.0
    mean = (n - 2 * ones) / n
    var = 0.0 if n < 2 else (1.0 - mean * mean) * n / (n - 1)
    return mean, var


def quadrature_probabilities(u: DenseUnitary, v: StatePrep) -> tuple:
    """Probability of outcome -1 for the ancilla sigma_x and sigma_y measurements.

    The register is ``cU |+>|psi>`` with the ancilla as qubit 0; sigma_y is
    measured by applying ``S^dag`` and then measuring in the ``|+->`` basis
    (i.e. ``S^dag`` followed by a Hadamard and a computational measurement).
    """
    if u.dim != v.v.dim:
        raise InvalidOperandError(f"unitary dim {u.dim} does not match state dim {v.v.dim}")
    start = embed(v.target_state, StateVector.plus())
    targets = list(range(1, start.num_qubits))
    state = apply(start, u, targets, controls=[0])
    p_x = outcome_probability(state, 0, PLUS_MINUS)
    state_y = apply(state, phase_gate(-math.pi / 2), [0])
    p_y = outcome_probability(state_y, 0, PLUS_MINUS)
    return p_x, p_y


def one_ancilla_overlap(
    u: DenseUnitary, v: StatePrep, num_samples: int, rng: np.random.Generator
) -> SampledEstimate:
    """``<sigma_x> + i <sigma_y>`` of the ancilla after ``cU |+>|psi>``.

    Samples are split evenly between the quadratures; an odd one goes to
    sigma_x. Each sample costs one preparation and one use of ``cU``.
    """
    n = _check_samples(num_samples)
    p_x, p_y = quadrature_probabilities(u, v)
    n_y = n // 2
    n_x = n - n_y
    ones_x = int(rng.binomial(n_x, min(1.0, max(0.0, p_x))))
    ones_y = int(rng.binomial(n_y, min(1.0, max(0.0, p_y))))
    mx, vx = _pm_mean(ones_x, n_x)
    my, vy = _pm_mean(ones_y, n_y)
    se = math.sqrt(vx / n_x + vy / n_y)
    ledger = (unit_prep() + unit_u()).copies(n)
    return SampledEstimate(value=complex(mx, my), num_samples=n, standard_error=se, ledger=ledger)


def direct_sample_mean(
    evolution: EvolutionOracle, v: StatePrep, num_samples: int, rng: np.random.Generator
) -> SampledEstimate:
    """Mean of ``N`` eigenvalues of ``A`` drawn with Born weights from ``|psi>``."""
    n = _check_samples(num_samples)
    if evolution.dim != v.v.dim:
        raise InvalidOperandError(f"A has dim {evolution.dim}, state prep dim {v.v.dim}")
    weights = evolution.eigen_weights(v.target_state)
    weights = weights / weights.sum()
    counts = rng.multinomial(n, weights)
    eig = np.asarray(evolution.eigenvalues, dtype=float)
    mean = float(counts @ eig) / n
    var = float(counts @ (eig - mean) ** 2) / (n - 1)
    return SampledEstimate(value=mean, num_samples=n, standard_error=math.sqrt(var / n),
                           ledger=unit_prep().copies(n))


__all__ = [
    "SampledEstimate",
    "direct_sample_mean",
    "one_ancilla_overlap",
    "quadrature_probabilities",
]
