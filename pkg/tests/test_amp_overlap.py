import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qexpect.amp_overlap import (
    amp_estimate,
    amp_ledger_formula,
    controlled_overlap_ops,
    hemisphere_distance,
    hemisphere_lift,
    overlap_estimate,
    overlap_ledger_formula,
    reconstruct_y,
)
from qexpect.oracles import StatePrep
from qexpect.statevec import DenseUnitary, InvalidOperandError, StateVector, pauli_x, ry

ZERO = StatePrep.from_state(StateVector.basis("0"))


def exact_overlap(u, v):
    psi = v.target_state.amplitudes
    return complex(np.vdot(psi, u.matrix @ psi))


def test_hemisphere_lift_examples():
    assert hemisphere_lift(0).as_array() == pytest.approx([0, 0, 1])
    assert hemisphere_lift(1).as_array() == pytest.approx([1, 0, 0])
    s = 1 / math.sqrt(2)
    assert hemisphere_lift(1j * s).as_array() == pytest.approx([0, s, s])
    with pytest.raises(InvalidOperandError):
        hemisphere_lift(1.1)


def test_hemisphere_distance_examples():
    assert hemisphere_distance(0.3 + 0.2j, 0.3 + 0.2j) == pytest.approx(0, abs=1e-12)
    assert hemisphere_distance(0, 1) == pytest.approx(math.pi / 2)
    d = 0.01
    assert hemisphere_distance(1, 1 - d * d / 2) == pytest.approx(d, rel=1e-4)


@settings(max_examples=50, deadline=None)
@given(st.complex_numbers(max_magnitude=1), st.complex_numbers(max_magnitude=1),
       st.complex_numbers(max_magnitude=1))
def test_hemisphere_distance_is_metric(a, b, c):
    dab, dbc, dac = hemisphere_distance(a, b), hemisphere_distance(b, c), hemisphere_distance(a, c)
    assert dab == pytest.approx(hemisphere_distance(b, a), abs=1e-12)
    assert 0 <= dab <= math.pi
    assert dac <= dab + dbc + 1e-9


def test_amp_identity(rng):
    est = amp_estimate(DenseUnitary(np.eye(2)), ZERO, 2.0**-5, None, rng)
    assert est.amplitude == pytest.approx(1.0)


def test_amp_zero_overlap(rng):
    p = 2.0**-5
    for _ in range(10):
        assert amp_estimate(pauli_x(), ZERO, p, 0.9, rng).amplitude <= math.sin(2 * math.pi * p) + 1e-12


def test_amp_rotation(rng):
    p, c = 2.0**-6, 0.9
    u = ry(math.pi / 3)
    target = math.cos(math.pi / 6)
    hits = sum(abs(math.acos(amp_estimate(u, ZERO, p, c, rng).amplitude) - math.acos(target)) <= 2 * math.pi * p
               for _ in range(60))
    assert hits / 60 >= 0.9


@pytest.mark.parametrize("p", [2.0**-4, 2.0**-7])
def test_amp_ledger_formula(rng, p):
    est = amp_estimate(ry(0.4), ZERO, p, None, rng)
    assert (est.ledger.state_preps, est.ledger.u_uses) == amp_ledger_formula(p)


def test_reconstruct_examples():
    s = 1 / math.sqrt(2)
    assert reconstruct_y(1, 1, s) == pytest.approx(1 + 0j)
    assert reconstruct_y(1, 0, s) == pytest.approx(-1 + 0j)
    with pytest.raises(InvalidOperandError):
        reconstruct_y(1.5, 0, 0)


def test_reconstruct_exact_amplitudes(rng):
    for _ in range(200):
        u = DenseUnitary.random(2, rng)
        v = StatePrep(DenseUnitary.random(2, rng))
        cu, tilted, prep = controlled_overlap_ops(u, v)
        a = abs(exact_overlap(u, v))
        b0 = abs(exact_overlap(cu, prep))
        bh = abs(exact_overlap(tilted, prep))
        assert reconstruct_y(a, b0, bh) == pytest.approx(exact_overlap(u, v), abs=1e-10)


def test_overlap_identity(rng):
    est = overlap_estimate(DenseUnitary(np.eye(2)), ZERO, 0.05, 0.9, rng)
    assert hemisphere_distance(est.value, 1) <= 1e-9


def test_overlap_phase_gate(rng):
    u = DenseUnitary(np.diag([1.0, np.exp(0.9j)]))
    for _ in range(5):
        est = overlap_estimate(u, ZERO, 0.05, 0.9, rng)
        assert hemisphere_distance(est.value, 1) <= 0.05


def test_overlap_random_confidence(rng):
    trials, hits = 60, 0
    for _ in range(trials):
        u = DenseUnitary.random(2, rng)
        v = StatePrep(DenseUnitary.random(2, rng))
        est = overlap_estimate(u, v, 0.05, 0.9, rng)
        hits += hemisphere_distance(est.value, exact_overlap(u, v)) <= 0.05
    assert hits / trials >= 0.9


@pytest.mark.parametrize("p", [2.0**-4, 2.0**-7])
def test_overlap_ledger_formula(rng, p):
    est = overlap_estimate(ry(0.4), ZERO, p, None, rng)
    assert (est.ledger.state_preps, est.ledger.u_uses) == overlap_ledger_formula(p)


def test_overlap_rejects_bad_args(rng):
    with pytest.raises(InvalidOperandError):
        overlap_estimate(ry(0.4), ZERO, 0.0, 0.9, rng)
    with pytest.raises(InvalidOperandError):
        overlap_estimate(DenseUnitary.random(2, rng), ZERO, 0.1, 0.9, rng)
