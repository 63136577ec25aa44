import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qexpect.statevec import (
    COMPUTATIONAL,
    PLUS_MINUS,
    ConsistencyError,
    DenseUnitary,
    InvalidOperandError,
    StateVector,
    apply,
    embed,
    expectation,
    hadamard,
    inner_product,
    measure,
    outcome_probability,
    pauli_x,
    pauli_y,
    pauli_z,
    phase_gate,
    release,
    ry,
)


def dense_apply(state, u, targets, controls, n):
    """Oracle: build the full 2^n matrix by summing over basis states."""
    dim = 1 << n
    full = np.zeros((dim, dim), dtype=complex)
    k = len(targets)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        if not all(bits[c] for c in controls):
            full[col, col] = 1
            continue
        sub = sum(bits[t] << (k - 1 - j) for j, t in enumerate(targets))
        for out in range(1 << k):
            new = list(bits)
            for j, t in enumerate(targets):
                new[t] = (out >> (k - 1 - j)) & 1
            row = sum(b << (n - 1 - q) for q, b in enumerate(new))
            full[row, col] += u.matrix[out, sub]
    return full @ state.amplitudes


def test_basis_and_zeros():
    s = StateVector.basis("10")
    assert s.num_qubits == 2
    assert np.allclose(s.amplitudes, [0, 0, 1, 0])
    assert np.allclose(StateVector.zeros(3).amplitudes[0], 1)


def test_norm_checked():
    with pytest.raises(InvalidOperandError):
        StateVector(np.array([1.0, 1.0]))
    with pytest.raises(InvalidOperandError):
        StateVector(np.array([1.0, 0, 0]))


def test_unitarity_checked():
    with pytest.raises(InvalidOperandError):
        DenseUnitary(np.array([[1, 1], [0, 1]]))


def test_x_on_zero():
    out = apply(StateVector.basis("0"), pauli_x(), [0])
    assert np.allclose(out.amplitudes, [0, 1])


def test_hadamard_probabilities():
    out = apply(StateVector.basis("0"), hadamard(), [0])
    assert np.allclose(out.probabilities(), [0.5, 0.5])


def test_cnot_makes_bell_state():
    s = apply(StateVector.basis("00"), hadamard(), [0])
    s = apply(s, pauli_x(), [1], controls=[0])
    assert np.allclose(s.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4))
def test_apply_matches_dense_oracle(seed, n):
    rng = np.random.default_rng(seed)
    state = StateVector.random(n, rng)
    qubits = list(rng.permutation(n))
    k = int(rng.integers(1, n))
    targets, rest = qubits[:k], qubits[k:]
    controls = rest[: int(rng.integers(0, len(rest) + 1))]
    u = DenseUnitary.random(k, rng)
    got = apply(state, u, targets, controls).amplitudes
    assert np.allclose(got, dense_apply(state, u, targets, controls, n), atol=1e-12)
    assert abs(np.linalg.norm(got) - 1) < 1e-10


def test_apply_rejects_bad_indices(rng):
    s = StateVector.random(2, rng)
    with pytest.raises(InvalidOperandError):
        apply(s, pauli_x(), [2])
    with pytest.raises(InvalidOperandError):
        apply(s, pauli_x(), [0], controls=[0])


def test_measure_deterministic_outcome(rng):
    out = measure(StateVector.basis("1"), 0, COMPUTATIONAL, rng)
    assert out.bit == 1 and out.probability == 1.0
    out = measure(StateVector.plus(), 0, PLUS_MINUS, rng)
    assert out.bit == 0
    assert np.allclose(out.post_state.amplitudes, StateVector.plus().amplitudes)


def test_measure_frequencies(rng):
    s = apply(StateVector.basis("0"), ry(2 * np.pi / 3), [0])  # P(1) = sin^2(pi/3) = 3/4
    ones = sum(measure(s, 0, COMPUTATIONAL, rng).bit for _ in range(4000))
    assert abs(ones / 4000 - 0.75) < 4 * np.sqrt(0.75 * 0.25 / 4000)


def test_measure_collapses_partner(rng):
    bell = apply(apply(StateVector.basis("00"), hadamard(), [0]), pauli_x(), [1], [0])
    out = measure(bell, 0, COMPUTATIONAL, rng)
    assert outcome_probability(out.post_state, 1) == pytest.approx(out.bit)


def test_release_product_qubit(rng):
    sys_state = StateVector.random(2, rng)
    joint = embed(sys_state, StateVector.basis("1"))
    back = release(joint, 0, COMPUTATIONAL, 1)
    assert np.allclose(back.amplitudes, sys_state.amplitudes)


def test_release_rejects_entangled(rng):
    bell = apply(apply(StateVector.basis("00"), hadamard(), [0]), pauli_x(), [1], [0])
    with pytest.raises(ConsistencyError):
        release(bell, 0, COMPUTATIONAL, 0)


def test_inner_product_and_expectation(rng):
    a = StateVector.random(2, rng)
    assert inner_product(a, a) == pytest.approx(1.0)
    assert expectation(StateVector.basis("0"), pauli_z().matrix) == pytest.approx(1.0)
    with pytest.raises(InvalidOperandError):
        inner_product(a, StateVector.basis("0"))


def test_gate_identities():
    assert np.allclose(pauli_x().matrix @ pauli_y().matrix, 1j * pauli_z().matrix)
    assert np.allclose(phase_gate(np.pi).matrix, pauli_z().matrix)
    assert np.allclose(hadamard().matrix @ hadamard().matrix, np.eye(2))


def test_controlled_puts_control_first():
    cx = pauli_x().controlled()
    assert np.allclose(cx.matrix, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def test_random_unitary_is_unitary(rng):
    u = DenseUnitary.random(3, rng)
    assert np.allclose(u.matrix @ u.dagger.matrix, np.eye(8), atol=1e-10)


def test_norm_preserved_over_long_sequence(rng):
    s = StateVector.random(10, rng)
    for _ in range(30):
        q = rng.choice(10, size=2, replace=False)
        s = apply(s, DenseUnitary.random(1, rng), [int(q[0])], controls=[int(q[1])])
    assert abs(np.linalg.norm(s.amplitudes) - 1) < 1e-10
