"""Operator toolkit: state preparation, selective sign changes, the Grover
reflection ``S = S0 S1`` and Hamiltonian evolution.

A physical backend would have to implement evolution under ``-A`` as well as
``A`` (the inverse of ``S`` contains ``U^dagger``); the exact
eigendecomposition used here provides both for free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from .ledger import ResourceLedger, evolution_cost, unit_prep, unit_u
from .statevec import DenseUnitary, InvalidOperandError, StateVector

HERMITIAN_TOL = 1e-10


class MatrixFormatError(ValueError):
    """A matrix/vector text file could not be parsed."""

    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True, eq=False)
class StatePrep:
    """Preparation unitary ``V`` with ``V|0...0> = target_state``."""

    v: DenseUnitary
    target_state: StateVector = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "target_state", StateVector(self.v.matrix[:, 0]))

    @property
    def num_qubits(self) -> int:
        return self.v.num_qubits

    @classmethod
    def from_state(cls, state: StateVector) -> "StatePrep":
        """Complete ``state`` to an orthonormal basis; ``state`` is the first column."""
        dim = state.dim
        basis = np.zeros((dim, dim), dtype=complex)
        basis[:, 0] = state.amplitudes
        col = 1
        for e in range(dim):
            if col == dim:
                break
            vec = np.zeros(dim, dtype=complex)
            vec[e] = 1.0
            # two Gram-Schmidt passes for numerical orthogonality
            for _ in range(2):
                vec = vec - basis[:, :col] @ (basis[:, :col].conj().T @ vec)
            norm = np.linalg.norm(vec)
            if norm > 1e-8:
                basis[:, col] = vec / norm
                col += 1
        return cls(DenseUnitary(basis))


def selective_sign_zero(num_qubits: int) -> DenseUnitary:
    """``P0 = I - 2|0><0|``."""
    if num_qubits < 1:
        raise InvalidOperandError("num_qubits must be >= 1")
    diag = np.ones(1 << num_qubits, dtype=complex)
    diag[0] = -1.0
    return DenseUnitary(np.diag(diag))


def _check_dims(v: StatePrep, u: DenseUnitary) -> None:
    if v.v.dim != u.dim:
        raise InvalidOperandError(
            f"state preparation acts on dim {v.v.dim}, unitary on dim {u.dim}"
        )


def grover_reflection(v: StatePrep, u: DenseUnitary) -> DenseUnitary:
    """``S = V P0 V^dag U V P0 V^dag U^dag``.

    On span{|psi>, U|psi>} this is a rotation with eigenvalues
    ``exp(+-i phi)``, ``phi = 2 arccos|<psi|U|psi>|``.
    """
    _check_dims(v, u)
    V, P0, U = v.v.matrix, selective_sign_zero(v.num_qubits).matrix, u.matrix
    s0 = V @ P0 @ V.conj().T
    s1 = U @ s0 @ U.conj().T
    return DenseUnitary(s0 @ s1)


def controlled_grover(v: StatePrep, u: DenseUnitary) -> DenseUnitary:
    """Controlled ``S`` built by conditioning only the two ``P0`` factors.

    The control is qubit 0. With the control in ``|0>`` every ``U`` and ``V``
    meets its inverse, so the result equals ``S.controlled()``.
    """
    _check_dims(v, u)
    I2 = np.eye(2)
    cP0 = selective_sign_zero(v.num_qubits).controlled().matrix
    V = np.kron(I2, v.v.matrix)
    U = np.kron(I2, u.matrix)
    Vd, Ud = V.conj().T, U.conj().T
    return DenseUnitary(V @ cP0 @ Vd @ U @ V @ cP0 @ Vd @ Ud)


def grover_cost(u_cost: ResourceLedger | None = None,
                prep_cost: ResourceLedger | None = None) -> ResourceLedger:
    """Charge for one use of ``S`` (or its controlled form): four uses of
    ``V``/``V^dag`` and two of ``U``/``U^dag``, all sequential."""
    u_cost = unit_u() if u_cost is None else u_cost
    prep_cost = unit_prep() if prep_cost is None else prep_cost
    return prep_cost.times(4) + u_cost.times(2)


class EvolutionOracle:
    """Evolution ``e^{-i(A - a0) t}`` under a Hermitian ``A`` (hbar = 1).

    The eigendecomposition of ``A`` is computed once and shared by every
    offset copy made with :meth:`with_offset`.
    """

    def __init__(self, hamiltonian, offset: float = 0.0, *, _eig=None):
        a = np.asarray(hamiltonian, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidOperandError(f"Hamiltonian must be square, got shape {a.shape}")
        if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL:
            raise InvalidOperandError("Hamiltonian is not Hermitian")
        a = a.copy()
        a.setflags(write=False)
        self.hamiltonian = a
        self.offset = float(offset)
        if _eig is None:
            w, vecs = np.linalg.eigh(a)
            w.setflags(write=False)
            vecs.setflags(write=False)
            _eig = (w, vecs)
        self.eigenvalues, self.eigenvectors = _eig

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def with_offset(self, offset: float) -> "EvolutionOracle":
        return EvolutionOracle(self.hamiltonian, offset, _eig=(self.eigenvalues, self.eigenvectors))

    def expectation(self, state: StateVector) -> float:
        """Exact ``<psi|A|psi>`` (without the offset)."""
        return float(np.vdot(state.amplitudes, self.hamiltonian @ state.amplitudes).real)

    def eigen_weights(self, state: StateVector) -> np.ndarray:
        """Born weights of ``state`` over the eigenvectors of ``A``."""
        return np.abs(self.eigenvectors.conj().T @ state.amplitudes) ** 2

    def __repr__(self):
        return f"EvolutionOracle(dim={self.dim}, offset={self.offset!r})"


def exp_at(oracle: EvolutionOracle, t: float, ledger: ResourceLedger | None = None) -> DenseUnitary:
    """``e^{-i(A - a0) t}``; if ``ledger`` is given it is charged ``M += 1, T += |t|``."""
    t = float(t)
    if not np.isfinite(t):
        raise InvalidOperandError(f"evolution time must be finite, got {t}")
    phases = np.exp(-1j * (oracle.eigenvalues - oracle.offset) * t)
    vecs = oracle.eigenvectors
    if ledger is not None:
        ledger.charge(ResourceLedger(evolution_uses=1, total_time=abs(t), depth=1))
    return DenseUnitary((vecs * phases) @ vecs.conj().T)


class PowerCache:
    """``W**(2**j)`` for a fixed unitary, computed from one Schur decomposition."""

    def __init__(self, w: DenseUnitary):
        t, z = scipy.linalg.schur(w.matrix, output="complex")
        self._angles = np.angle(np.diag(t))
        self._z = z
        self._cache: dict[int, np.ndarray] = {}
        self.dim = w.dim

    def power(self, exponent: int) -> np.ndarray:
        m = self._cache.get(exponent)
        if m is None:
            phases = np.exp(1j * float(exponent) * self._angles)
            m = (self._z * phases) @ self._z.conj().T
            self._cache[exponent] = m
        return m


def random_hermitian(dim: int, rng: np.random.Generator, spectrum=(-1.0, 1.0)) -> np.ndarray:
    """Random Hermitian matrix with eigenvalues drawn uniformly from ``spectrum``."""
    lo, hi = spectrum
    q = DenseUnitary.random(dim.bit_length() - 1, rng).matrix
    eig = rng.uniform(lo, hi, size=dim)
    return (q * eig) @ q.conj().T


# ---------------------------------------------------------------------------
# Plain-text matrix format
#
#   # comment lines and blank lines are ignored
#   <dim>
#   <re> <im>        one entry per line, row-major; dim*dim lines for a
#   ...              matrix, dim lines for a vector
# ---------------------------------------------------------------------------


def _read_entries(path):
    path = Path(path)
    dim = None
    entries = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if dim is None:
                if len(parts) != 1:
                    raise MatrixFormatError(path, lineno, "expected a single dimension header")
                try:
                    dim = int(parts[0])
                except ValueError:
                    raise MatrixFormatError(path, lineno, f"bad dimension {parts[0]!r}") from None
                if dim < 1:
                    raise MatrixFormatError(path, lineno, "dimension must be positive")
                continue
            if len(parts) != 2:
                raise MatrixFormatError(path, lineno, "expected 're im' pair")
            try:
                entries.append((lineno, complex(float(parts[0]), float(parts[1]))))
            except ValueError:
                raise MatrixFormatError(path, lineno, f"bad number in {line!r}") from None
    if dim is None:
        raise MatrixFormatError(path, 0, "missing dimension header")
    return path, dim, entries


def load_matrix(path) -> np.ndarray:
    path, dim, entries = _read_entries(path)
    if len(entries) != dim * dim:
        line = entries[-1][0] if entries else 1
        raise MatrixFormatError(path, line, f"expected {dim * dim} entries, found {len(entries)}")
    return np.array([z for _, z in entries], dtype=complex).reshape(dim, dim)


def load_vector(path) -> np.ndarray:
    path, dim, entries = _read_entries(path)
    if len(entries) != dim:
        line = entries[-1][0] if entries else 1
        raise MatrixFormatError(path, line, f"expected {dim} entries, found {len(entries)}")
    return np.array([z for _, z in entries], dtype=complex)


def save_matrix(path, array) -> None:
    """Write a matrix or vector in the plain-text format (``repr`` precision)."""
    a = np.asarray(array, dtype=complex)
    dim = a.shape[0]
    lines = [str(dim)]
    lines += [f"{float(z.real)!r} {float(z.imag)!r}" for z in a.reshape(-1)]
    Path(path).write_text("\n".join(lines) + "\n")


__all__ = [
    "EvolutionOracle",
    "MatrixFormatError",
    "PowerCache",
    "StatePrep",
    "controlled_grover",
    "evolution_cost",
    "exp_at",
    "grover_cost",
    "grover_reflection",
    "load_matrix",
    "load_vector",
    "random_hermitian",
    "save_matrix",
    "selective_sign_zero",
]
