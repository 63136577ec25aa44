import math

import numpy as np
import pytest

from qexpect.confidence import failure_bound
from qexpect.pea import (
    TWO_PI,
    _Kickback,
    binary_fraction,
    bits_for_precision,
    circular_distance,
    estimate_delta_prime,
    is_acceptable,
    kickback_one_probability,
    modified_pea_uses,
    nearest_approximations,
    original_pea_uses,
    pea_modified,
    pea_original,
    pea_parallel_model,
    wrap_signed,
)
from qexpect.statevec import (
    COMPUTATIONAL,
    DenseUnitary,
    StateVector,
    apply,
    hadamard,
    outcome_probability,
    pauli_x,
)


def phase_unitary(phi):
    return DenseUnitary(np.diag([1.0, np.exp(1j * phi)]))


EIGEN = StateVector.basis("1")


def test_bits_for_precision():
    assert bits_for_precision(1.0) == 1
    assert bits_for_precision(2.0**-6) == 6
    assert bits_for_precision(0.05) == 5
    assert original_pea_uses(2.0**-6) == 63


def test_helpers():
    assert binary_fraction([1, 0, 1]) == 0.625
    assert wrap_signed(1.5 * math.pi) == pytest.approx(-0.5 * math.pi)
    assert circular_distance(0.1, TWO_PI - 0.1) == pytest.approx(0.2)
    lo, hi = nearest_approximations(TWO_PI * 0.3, 2)
    assert (lo / TWO_PI, hi / TWO_PI) == (0.25, 0.5)
    assert is_acceptable(TWO_PI * 0.5, TWO_PI * 0.3, 2)
    assert not is_acceptable(0.0, TWO_PI * 0.3, 2)


def test_identity_gives_zero(rng):
    w = DenseUnitary(np.eye(2))
    for _ in range(20):
        assert pea_original(w, EIGEN, 2.0**-5, rng).phase == 0.0
        assert pea_modified(w, EIGEN, 2.0**-5, 0.9, rng).phase == 0.0


def test_exact_grid_phase(rng):
    n = 6
    for _ in range(20):
        j = int(rng.integers(0, 2**n))
        w = phase_unitary(TWO_PI * j / 2**n)
        est = pea_original(w, EIGEN, 2.0**-n, rng)
        assert est.bits == tuple(int(b) for b in format(j, f"0{n}b"))
        assert all(min(q, 1 - q) < 1e-12 for q in est.bit_probabilities)


def test_original_ledger():
    est = pea_original(phase_unitary(0.3), EIGEN, 2.0**-4, np.random.default_rng(0))
    assert (est.ledger.u_uses, est.ledger.state_preps) == (15, 1)


def test_worst_case_nearest_frequency(rng):
    n = 5
    phi = TWO_PI * 10.5 / 2**n
    w = phase_unitary(phi)
    hits = sum(is_acceptable(pea_original(w, EIGEN, 2.0**-n, rng).phase, phi, n) for _ in range(600))
    assert hits / 600 >= 8 / math.pi**2 - 4 * math.sqrt(0.19 * 0.81 / 600)


def test_kernel_matches_reference(rng):
    w = DenseUnitary.random(2, rng)
    kick = _Kickback(w)
    psi = StateVector.random(2, rng)
    for exponent, anc, comp in [(1, 0.0, 0.0), (4, -math.pi / 2, 0.3), (8, 0.0, 2.1)]:
        seed = int(rng.integers(2**31))
        bit, p1, branch = kick.round(psi.amplitudes, exponent, anc, comp, np.random.default_rng(seed))
        bit_r, p1_r, branch_r = kick.round_reference(psi, exponent, anc, comp, np.random.default_rng(seed))
        assert bit == bit_r and p1 == pytest.approx(p1_r, abs=1e-12)
        assert np.allclose(branch, branch_r.amplitudes, atol=1e-10)


def test_kickback_probability_closed_form():
    for phi in np.linspace(0, TWO_PI, 7):
        bit, p1, _ = _Kickback(phase_unitary(phi)).round(EIGEN.amplitudes, 1, 0.0, 0.0, np.random.default_rng(1))
        assert p1 == pytest.approx(kickback_one_probability(phi, 0, 0))


@pytest.mark.parametrize("delta", [0.0, math.pi / 2, 2.0])
def test_delta_prime_converges(rng, delta):
    w = phase_unitary(delta)
    est = estimate_delta_prime(w, EIGEN, 1, 4000, rng)
    assert circular_distance(est.delta_prime, delta) < 0.1
    assert est.x1 == pytest.approx(math.sin(delta / 2) ** 2, abs=0.03)
    assert est.x2 == pytest.approx(math.sin(delta / 2 - math.pi / 4) ** 2, abs=0.03)


@pytest.mark.parametrize("r", [16, 32])
def test_delta_prime_tail(rng, r):
    delta = 1.234
    w = phase_unitary(delta)
    trials = 1000
    bad = sum(circular_distance(estimate_delta_prime(w, EIGEN, 1, r, rng).delta_prime, delta) > math.pi / 4
              for _ in range(trials))
    assert bad / trials <= 4 * math.exp(-r / 8) + 3 * math.sqrt(0.25 / trials)


def test_modified_confidence(rng):
    p, c = 2.0**-6, 0.95
    hits = 0
    for _ in range(200):
        phi = rng.uniform(0, TWO_PI)
        est = pea_modified(phase_unitary(phi), EIGEN, p, c, rng)
        hits += circular_distance(est.phase, phi) <= math.pi / 2 ** (est.n_bits - 1)
    assert hits / 200 >= 0.95


def test_modified_ledger_and_r():
    est = pea_modified(phase_unitary(0.7), EIGEN, 2.0**-5, 0.9, np.random.default_rng(3))
    assert est.r == 31  # select_r(5, 0.9) = 30, rounded up to odd
    assert failure_bound(5, est.r) < 0.1
    assert est.ledger.u_uses == modified_pea_uses(5, 31)
    assert est.ledger.state_preps == 1
    exp = pea_modified(phase_unitary(0.7), EIGEN, 2.0**-5, 0.9, np.random.default_rng(3),
                       exponential_confidence=True)
    assert exp.ledger.u_uses == modified_pea_uses(5, 31, True) > est.ledger.u_uses


def test_parallel_model_matches_sequential():
    for seed in range(10):
        phi = np.random.default_rng(100 + seed).uniform(0, TWO_PI)
        seq = pea_modified(phase_unitary(phi), EIGEN, 2.0**-6, 0.9, np.random.default_rng(seed))
        par = pea_parallel_model(phi, 2.0**-6, 0.9, np.random.default_rng(seed))
        assert par.bits == seq.bits
        assert par.bit_probabilities == pytest.approx(seq.bit_probabilities, abs=1e-12)
        assert par.ledger.u_uses == seq.ledger.u_uses
        assert par.ledger.depth <= par.n_bits + 1 < seq.ledger.depth


def test_parallel_model_zero_phase(rng):
    est = pea_parallel_model(0.0, 2.0**-5, 0.9, rng)
    assert est.phase == 0.0 and est.ledger.depth <= 6


def test_parallel_model_with_projection(rng):
    est = pea_parallel_model(1.0, 2.0**-4, 0.9, rng, eigenphase_lower_bound=0.5)
    plain = pea_parallel_model(1.0, 2.0**-4, 0.9, rng)
    assert est.ledger.u_uses > plain.ledger.u_uses
    assert est.ledger.depth > plain.ledger.depth


@pytest.mark.parametrize("m", [2, 4])
def test_ghz_kickback_phase(m):
    """GHZ over m ancillas, each controlling W on its own eigenstate copy,
    decodes to the same probability as a single kickback of W**m."""
    phi = 0.77
    n = 2 * m
    state = StateVector.basis("0" * m + "1" * m)
    state = apply(state, hadamard(), [0])
    for j in range(1, m):
        state = apply(state, pauli_x(), [j], [0])
    for j in range(m):
        state = apply(state, phase_unitary(phi), [m + j], [j])
    for j in range(1, m):
        state = apply(state, pauli_x(), [j], [0])
    state = apply(state, hadamard(), [0])
    assert n == state.num_qubits
    assert outcome_probability(state, 0, COMPUTATIONAL) == pytest.approx(
        kickback_one_probability(m * phi, 0.0, 0.0), abs=1e-12
    )
