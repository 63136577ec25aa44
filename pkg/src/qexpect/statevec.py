"""Dense statevector simulator.

Qubit 0 is the most significant bit of the amplitude index, so the basis
state ``|q0 q1 ... q_{n-1}>`` lives at index ``q0 * 2**(n-1) + ... + q_{n-1}``.
Ancillas added with :func:`embed` are prepended and therefore become qubit 0.

All operations return new objects; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
COLLAPSE_TOL = 1e-14

COMPUTATIONAL = "computational"
PLUS_MINUS = "plus-minus"
_BASES = (COMPUTATIONAL, PLUS_MINUS)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class InvalidOperandError(ValueError):
    """Operand shapes, indices or values are inconsistent."""


class ConsistencyError(RuntimeError):
    """An internal invariant of the simulation was violated."""


def _qubit_count(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise InvalidOperandError(f"dimension {dim} is not a power of two >= 2")
    return n


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over ``num_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        _qubit_count(amps.size)
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidOperandError(f"state norm^2 is {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise InvalidOperandError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(amps)

    @classmethod
    def basis(cls, bits: str | int, num_qubits: int | None = None) -> "StateVector":
        """Computational basis state from a bit string ``"010"`` or an index."""
        if isinstance(bits, str):
            num_qubits = len(bits)
            index = int(bits, 2)
        else:
            if num_qubits is None:
                raise InvalidOperandError("num_qubits is required for an integer index")
            index = int(bits)
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def zeros(cls, num_qubits: int) -> "StateVector":
        return cls.basis(0, num_qubits)

    @classmethod
    def plus(cls) -> "StateVector":
        return cls(np.array([1, 1], dtype=complex) / np.sqrt(2))

    @classmethod
    def random(cls, num_qubits: int, rng: np.random.Generator) -> "StateVector":
        dim = 1 << num_qubits
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return cls.from_amplitudes(amps, normalize=True)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits}, amplitudes={self.amplitudes!r})"


@dataclass(frozen=True, eq=False)
class DenseUnitary:
    """A unitary matrix acting on ``log2(dim)`` qubits. Unitarity is checked on construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidOperandError(f"expected a square matrix, got shape {m.shape}")
        _qubit_count(m.shape[0])
        defect = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if defect > UNITARY_TOL:
            raise InvalidOperandError(f"matrix is not unitary (max |UU^dag - I| = {defect:.3g})")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    @property
    def dagger(self) -> "DenseUnitary":
        return DenseUnitary(self.matrix.conj().T)

    def __matmul__(self, other: "DenseUnitary") -> "DenseUnitary":
        """Operator product; ``a @ b`` applies ``b`` first."""
        if self.dim != other.dim:
            raise InvalidOperandError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return DenseUnitary(self.matrix @ other.matrix)

    def kron(self, other: "DenseUnitary") -> "DenseUnitary":
        return DenseUnitary(np.kron(self.matrix, other.matrix))

    def controlled(self) -> "DenseUnitary":
        """``|0><0| (x) I + |1><1| (x) U`` with the control as the new qubit 0."""
        d = self.dim
        m = np.eye(2 * d, dtype=complex)
        m[d:, d:] = self.matrix
        return DenseUnitary(m)

    @classmethod
    def identity(cls, num_qubits: int) -> "DenseUnitary":
        return cls(np.eye(1 << num_qubits, dtype=complex))

    @classmethod
    def random(cls, num_qubits: int, rng: np.random.Generator) -> "DenseUnitary":
        """Haar-random unitary (QR of a complex Ginibre matrix with phase fix)."""
        dim = 1 << num_qubits
        z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        d = np.diagonal(r)
        return cls(q * (d / np.abs(d)))


# Common single-qubit gates.
def pauli_x() -> DenseUnitary:
    return DenseUnitary(np.array([[0, 1], [1, 0]], dtype=complex))


def pauli_y() -> DenseUnitary:
    return DenseUnitary(np.array([[0, -1j], [1j, 0]], dtype=complex))


def pauli_z() -> DenseUnitary:
    return DenseUnitary(np.diag([1, -1]).astype(complex))


def hadamard() -> DenseUnitary:
    return DenseUnitary(_H)


def phase_gate(angle: float) -> DenseUnitary:
    """``diag(1, e^{i angle})``."""
    return DenseUnitary(np.diag([1.0, np.exp(1j * angle)]))


def ry(angle: float) -> DenseUnitary:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return DenseUnitary(np.array([[c, -s], [s, c]], dtype=complex))


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    bit: int
    basis: str
    post_state: StateVector
    probability: float


def _check_indices(n: int, targets: Sequence[int], controls: Sequence[int]) -> None:
    for q in list(targets) + list(controls):
        if not 0 <= q < n:
            raise InvalidOperandError(f"qubit index {q} out of range for {n} qubits")
    if len(set(targets)) != len(targets):
        raise InvalidOperandError(f"repeated target qubits {list(targets)}")
    if len(set(controls)) != len(controls):
        raise InvalidOperandError(f"repeated control qubits {list(controls)}")
    if set(targets) & set(controls):
        raise InvalidOperandError("target and control qubits overlap")


def apply(
    state: StateVector,
    u: DenseUnitary | np.ndarray,
    targets: Sequence[int],
    controls: Sequence[int] = (),
) -> StateVector:
    """Apply ``u`` to ``targets``, conditioned on every control qubit being ``|1>``.

    ``targets[0]`` is the most significant qubit of ``u``'s index.
    """
    n = state.num_qubits
    targets = [int(t) for t in targets]
    controls = [int(c) for c in controls]
    _check_indices(n, targets, controls)
    m = u.matrix if isinstance(u, DenseUnitary) else np.asarray(u, dtype=complex)
    k = len(targets)
    if m.shape != (1 << k, 1 << k):
        raise InvalidOperandError(
            f"operator of shape {m.shape} does not act on {k} target qubit(s)"
        )

    psi = state.amplitudes.reshape((2,) * n).copy()
    index = [slice(None)] * n
    for c in controls:
        index[c] = 1
    index = tuple(index)
    sub = psi[index]
    # axes of `sub` are the non-control qubits in increasing order
    remaining = [q for q in range(n) if q not in controls]
    axes = [remaining.index(t) for t in targets]
    op = m.reshape((2,) * (2 * k))
    moved = np.tensordot(op, sub, axes=(list(range(k, 2 * k)), axes))
    psi[index] = np.moveaxis(moved, list(range(k)), axes)
    return StateVector(psi.reshape(-1))


def _to_measurement_basis(state: StateVector, qubit: int, basis: str) -> np.ndarray:
    if basis == COMPUTATIONAL:
        return state.amplitudes
    return apply(state, _H, [qubit]).amplitudes


def outcome_probability(state: StateVector, qubit: int, basis: str = COMPUTATIONAL) -> float:
    """Born probability of reading ``1`` (or ``|->``) on ``qubit``."""
    if basis not in _BASES:
        raise InvalidOperandError(f"unknown basis {basis!r}")
    if not 0 <= qubit < state.num_qubits:
        raise InvalidOperandError(f"qubit index {qubit} out of range")
    amps = _to_measurement_basis(state, qubit, basis)
    n = state.num_qubits
    block = amps.reshape((1 << qubit, 2, 1 << (n - qubit - 1)))
    return float(np.sum(np.abs(block[:, 1, :]) ** 2))


def measure(
    state: StateVector,
    qubit: int,
    basis: str,
    rng: np.random.Generator,
) -> MeasurementOutcome:
    """Projective measurement of one qubit with collapse.

    In the plus-minus basis outcome 0 is ``|+>`` and outcome 1 is ``|->``.
    """
    if basis not in _BASES:
        raise InvalidOperandError(f"unknown basis {basis!r}")
    if not 0 <= qubit < state.num_qubits:
        raise InvalidOperandError(f"qubit index {qubit} out of range")
    n = state.num_qubits
    amps = _to_measurement_basis(state, qubit, basis)
    block = amps.reshape((1 << qubit, 2, 1 << (n - qubit - 1)))
    p1 = float(np.sum(np.abs(block[:, 1, :]) ** 2))
    bit = int(rng.random() < p1)
    prob = p1 if bit else 1.0 - p1
    if prob < COLLAPSE_TOL:
        raise ConsistencyError(f"drew outcome {bit} with probability {prob:.3g}")
    projected = np.zeros_like(block)
    projected[:, bit, :] = block[:, bit, :] / np.sqrt(prob)
    post = StateVector(projected.reshape(-1))
    if basis == PLUS_MINUS:
        post = apply(post, _H, [qubit])
    return MeasurementOutcome(bit=bit, basis=basis, post_state=post, probability=prob)


def release(state: StateVector, qubit: int, basis: str, bit: int) -> StateVector:
    """Remove a qubit known to be in a product basis state (e.g. just measured).

    Raises :class:`ConsistencyError` if ``qubit`` is entangled with the rest.
    """
    if state.num_qubits < 2:
        raise InvalidOperandError("cannot release the only qubit of a register")
    n = state.num_qubits
    amps = _to_measurement_basis(state, qubit, basis)
    block = amps.reshape((1 << qubit, 2, 1 << (n - qubit - 1)))
    leftover = np.sum(np.abs(block[:, 1 - bit, :]) ** 2)
    if leftover > NORM_TOL:
        raise ConsistencyError(f"qubit {qubit} is not in basis state {bit} ({basis})")
    rest = block[:, bit, :].reshape(-1)
    return StateVector.from_amplitudes(rest, normalize=True)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``."""
    if a.num_qubits != b.num_qubits:
        raise InvalidOperandError(
            f"register sizes differ: {a.num_qubits} vs {b.num_qubits} qubits"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def embed(state: StateVector, ancilla_state: StateVector) -> StateVector:
    """``|ancilla> (x) |state>``: the ancilla register becomes the leading qubits."""
    return StateVector(np.kron(ancilla_state.amplitudes, state.amplitudes))


def expectation(state: StateVector, operator: np.ndarray) -> complex:
    """``<state|operator|state>`` for a full-register matrix."""
    op = np.asarray(operator, dtype=complex)
    if op.shape != (state.dim, state.dim):
        raise InvalidOperandError(f"operator shape {op.shape} does not match dim {state.dim}")
    return complex(np.vdot(state.amplitudes, op @ state.amplitudes))
