"""One-ancilla phase estimation.

The system register persists across all bits of a run and collapses with
every ancilla measurement, so a run on a superposition of eigenstates
behaves like a (possibly incomplete) von Neumann measurement of ``W``.

Precision is in turns: goal precision ``p`` fixes ``n`` with ``2**n >= 1/p``
and the returned phase is a multiple of ``2 pi / 2**n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .confidence import DEFAULT_R_CAP, select_r
from .ledger import ResourceLedger, unit_prep, unit_u
from .oracles import PowerCache
from .statevec import (
    COLLAPSE_TOL,
    PLUS_MINUS,
    ConsistencyError,
    DenseUnitary,
    InvalidOperandError,
    StateVector,
    apply,
    embed,
    measure,
    release,
)

TWO_PI = 2.0 * math.pi


@dataclass
class DeltaPrimeEstimate:
    delta_prime: float
    x1: float
    x2: float
    r: int


@dataclass
class PhaseEstimate:
    """Phase ``2 pi [.a_1 ... a_n]_2`` in ``[0, 2 pi)`` plus run diagnostics.

    ``bits[0]`` is the most significant bit ``a_1``. ``bit_probabilities``
    lists, in measurement order, the Born probability of outcome 1 for every
    ancilla measurement made.
    """

    phase: float
    n_bits: int
    p: float
    c: float | None
    ledger: ResourceLedger
    bits: tuple = ()
    r: int | None = None
    delta_prime: DeltaPrimeEstimate | None = None
    final_state: StateVector | None = None
    bit_probabilities: list = field(default_factory=list, repr=False)

    @property
    def turns(self) -> float:
        return self.phase / TWO_PI


def bits_for_precision(p: float) -> int:
    """Smallest ``n >= 1`` with ``2**n >= 1/p``."""
    if not 0 < p <= 1:
        raise InvalidOperandError(f"precision must lie in (0, 1], got {p}")
    n = 1
    while 2.0**n * p < 1.0:
        n += 1
    return n


def original_pea_uses(p: float) -> int:
    """``N(p) = 2**n - 1`` controlled-W uses of the single-shot PEA."""
    return 2 ** bits_for_precision(p) - 1


def bit_repetitions(n: int, r: int, exponential_confidence: bool = False) -> list:
    """Repetitions for bits ``k = n-1, ..., 1`` (in that order)."""
    return [(2 ** (n - k)) * r if exponential_confidence else r for k in range(n - 1, 0, -1)]


def modified_pea_uses(n: int, r: int, exponential_confidence: bool = False) -> int:
    """Controlled-W uses of the repeated-measurement PEA."""
    reps = bit_repetitions(n, r, exponential_confidence)
    return 2 * r * 2 ** (n - 1) + sum(m * 2 ** (k - 1) for m, k in zip(reps, range(n - 1, 0, -1)))


def binary_fraction(bits) -> float:
    """``[.b_1 b_2 ...]_2``."""
    return sum(b / 2.0 ** (j + 1) for j, b in enumerate(bits))


def wrap_signed(phase: float) -> float:
    """Map a phase to ``[-pi, pi)``."""
    return (phase + math.pi) % TWO_PI - math.pi


def circular_distance(a: float, b: float) -> float:
    """Angular distance between ``e^{ia}`` and ``e^{ib}``, in ``[0, pi]``."""
    return abs(wrap_signed(a - b))


def kickback_one_probability(kickback: float, ancilla_phase: float, compensation: float) -> float:
    """Probability of reading ``|->`` after ancilla phase ``ancilla_phase + kickback - compensation``."""
    return math.sin((kickback + ancilla_phase - compensation) / 2.0) ** 2


class _Kickback:
    """One ancilla round: prepare, controlled-W power, phase compensation, +/- readout.

    :meth:`round` works on the bare system amplitudes: with the ancilla in
    ``(|0> + e^{ib}|1>)/sqrt 2`` after kickback and compensation, the ``|+>``
    and ``|->`` branches of the system are ``(psi +- e^{ib} W^m psi) / 2``.
    :meth:`round_reference` performs the same round through the generic
    simulator and exists to cross-check the kernel.
    """

    def __init__(self, w: DenseUnitary):
        self.powers = PowerCache(w)
        self.num_system = w.num_qubits
        self.targets = list(range(1, self.num_system + 1))

    def round(self, psi: np.ndarray, exponent: int, ancilla_phase: float,
              compensation: float, rng: np.random.Generator):
        turned = np.exp(1j * (ancilla_phase - compensation)) * (self.powers.power(exponent) @ psi)
        minus = 0.5 * (psi - turned)
        p1 = float(np.vdot(minus, minus).real)
        bit = int(rng.random() < p1)
        prob = p1 if bit else 1.0 - p1
        if prob < COLLAPSE_TOL:
            raise ConsistencyError(f"drew outcome {bit} with probability {prob:.3g}")
        branch = minus if bit else 0.5 * (psi + turned)
        return bit, p1, branch / math.sqrt(prob)

    def round_reference(self, system: StateVector, exponent: int, ancilla_phase: float,
                        compensation: float, rng: np.random.Generator):
        anc = StateVector(np.array([1.0, np.exp(1j * ancilla_phase)]) / math.sqrt(2.0))
        state = embed(system, anc)
        state = apply(state, self.powers.power(exponent), self.targets, controls=[0])
        state = apply(state, np.diag([1.0, np.exp(-1j * compensation)]), [0])
        out = measure(state, 0, PLUS_MINUS, rng)
        p1 = out.probability if out.bit else 1.0 - out.probability
        return out.bit, p1, release(out.post_state, 0, PLUS_MINUS, out.bit)


def _check_inputs(w: DenseUnitary, initial: StateVector) -> None:
    if w.dim != initial.dim:
        raise InvalidOperandError(
            f"unitary acts on dim {w.dim} but the initial state has dim {initial.dim}"
        )


def pea_original(
    w: DenseUnitary,
    initial: StateVector,
    p: float,
    rng: np.random.Generator,
    *,
    w_cost: ResourceLedger | None = None,
    prep_cost: ResourceLedger | None = None,
) -> PhaseEstimate:
    """Single-shot phase estimation, least significant bit first.

    Charges ``2**n - 1`` uses of controlled ``W`` (each costing ``w_cost``)
    and one preparation of ``initial`` (``prep_cost``).
    """
    _check_inputs(w, initial)
    w_cost = unit_u() if w_cost is None else w_cost
    prep_cost = unit_prep() if prep_cost is None else prep_cost
    n = bits_for_precision(p)
    kick = _Kickback(w)
    system = initial.amplitudes
    bits = [0] * n  # bits[j] holds b_{j+1}
    probs = []
    for k in range(n, 0, -1):
        compensation = math.pi * binary_fraction(bits[k:n])
        bit, p1, system = kick.round(system, 2 ** (k - 1), 0.0, compensation, rng)
        bits[k - 1] = bit
        probs.append(p1)
    ledger = prep_cost + w_cost.times(2**n - 1)
    return PhaseEstimate(
        phase=TWO_PI * binary_fraction(bits),
        n_bits=n,
        p=p,
        c=None,
        ledger=ledger,
        bits=tuple(bits),
        final_state=StateVector.from_amplitudes(system, normalize=True),
        bit_probabilities=probs,
    )


def _delta_prime_rounds(kick, system, n, r, rng, probs):
    exponent = 2 ** (n - 1)
    ones = [0, 0]
    for s, ancilla_phase in enumerate((0.0, -math.pi / 2.0)):
        for _ in range(r):
            bit, p1, system = kick.round(system, exponent, ancilla_phase, 0.0, rng)
            ones[s] += bit
            probs.append(p1)
    x1, x2 = ones[0] / r, ones[1] / r
    return DeltaPrimeEstimate(_delta_from_means(x1, x2), x1, x2, r), system


def _delta_from_means(x1: float, x2: float) -> float:
    return math.atan2(1.0 - 2.0 * x2, 1.0 - 2.0 * x1) % TWO_PI


def estimate_delta_prime(
    w: DenseUnitary,
    state: StateVector,
    n: int,
    r: int,
    rng: np.random.Generator,
) -> DeltaPrimeEstimate:
    """Estimate the kickback phase of ``W**(2**(n-1))`` from two quadratures.

    ``x1`` is the fraction of ``|->`` outcomes with the ancilla in ``|+>``,
    ``x2`` the same with ``(|0> - i|1>)/sqrt 2``; the estimate is the
    argument of ``(1 - 2 x1) + i (1 - 2 x2)``.
    """
    _check_inputs(w, state)
    if r < 1 or n < 1:
        raise InvalidOperandError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
    est, _ = _delta_prime_rounds(_Kickback(w), state.amplitudes, n, r, rng, [])
    return est


def _closer_to_pi(angle: float) -> int:
    return int(circular_distance(angle, math.pi) < circular_distance(angle, 0.0))


def _majority(ones: int, reps: int) -> int:
    # ties go to 0
    return int(2 * ones > reps)


def resolve_repetitions(n: int, c: float, r: int | None, r_cap: int) -> int:
    if r is not None:
        if r < 1:
            raise InvalidOperandError(f"r must be >= 1, got {r}")
        return int(r)
    r = select_r(n, c, cap=r_cap)
    if r % 2 == 0:
        r += 1
    return r


def _anchored_delta(delta_est: float, a_n: int) -> float:
    """Representative of ``delta_est`` within ``pi/2`` of ``a_n * pi``.

    With ``a_n = 0`` and an estimate just below ``2 pi`` the compensation must
    use the negative representative, otherwise the carry into the higher
    bits is lost and the result is off by up to two least-significant steps.
    """
    return a_n * math.pi + wrap_signed(delta_est - a_n * math.pi)


def _compensation(bits, k: int, n: int, delta_est: float) -> float:
    # bits[j] is a_{j+1}; a_n enters only through the quadrature estimate
    delta = _anchored_delta(delta_est, bits[n - 1])
    return math.pi * binary_fraction(bits[k:n - 1]) + delta / 2.0 ** (n - k)


def _modified_ledger(n, r, reps, w_cost, prep_cost):
    ledger = prep_cost + w_cost.times(2 ** (n - 1)).copies(2 * r)
    for m, k in zip(reps, range(n - 1, 0, -1)):
        ledger = ledger + w_cost.times(2 ** (k - 1)).copies(m)
    return ledger


def pea_modified(
    w: DenseUnitary,
    initial: StateVector,
    p: float,
    c: float,
    rng: np.random.Generator,
    *,
    r: int | None = None,
    exponential_confidence: bool = False,
    r_cap: int = DEFAULT_R_CAP,
    w_cost: ResourceLedger | None = None,
    prep_cost: ResourceLedger | None = None,
) -> PhaseEstimate:
    """Phase estimation with confidence level ``c``.

    The least significant bit comes from a two-quadrature estimate of the
    kickback phase; each further bit is a majority vote over ``r`` rounds,
    compensated by the quadrature estimate and the bits found so far. The
    result is one of the two nearest ``n``-bit approximations except with
    probability at most ``failure_bound(n, r) < 1 - c``.

    ``r`` overrides the repetition count (no odd rounding is applied then).
    With ``exponential_confidence`` bit ``k`` uses ``2**(n-k) r`` rounds.
    Repetitions are charged as parallel for the ledger depth.
    """
    _check_inputs(w, initial)
    if not 0 < c < 1:
        raise InvalidOperandError(f"confidence must lie in (0, 1), got {c}")
    w_cost = unit_u() if w_cost is None else w_cost
    prep_cost = unit_prep() if prep_cost is None else prep_cost
    n = bits_for_precision(p)
    r = resolve_repetitions(n, c, r, r_cap)
    reps = bit_repetitions(n, r, exponential_confidence)

    kick = _Kickback(w)
    probs = []
    dp, system = _delta_prime_rounds(kick, initial.amplitudes, n, r, rng, probs)
    bits = [0] * n
    bits[n - 1] = _closer_to_pi(dp.delta_prime)
    for m, k in zip(reps, range(n - 1, 0, -1)):
        compensation = _compensation(bits, k, n, dp.delta_prime)
        ones = 0
        for _ in range(m):
            bit, p1, system = kick.round(system, 2 ** (k - 1), 0.0, compensation, rng)
            ones += bit
            probs.append(p1)
        bits[k - 1] = _majority(ones, m)

    return PhaseEstimate(
        phase=TWO_PI * binary_fraction(bits),
        n_bits=n,
        p=p,
        c=c,
        ledger=_modified_ledger(n, r, reps, w_cost, prep_cost),
        bits=tuple(bits),
        r=r,
        delta_prime=dp,
        final_state=StateVector.from_amplitudes(system, normalize=True),
        bit_probabilities=probs,
    )


def _model_modified_run(eigenphase, n, r, reps, rng, probs):
    """The repeated-measurement PEA on an exact eigenstate, from closed-form
    outcome probabilities. Draws ``rng.random()`` once per round, in the same
    order as :func:`pea_modified`."""
    ones = [0, 0]
    kick = (2 ** (n - 1)) * eigenphase
    for s, ancilla_phase in enumerate((0.0, -math.pi / 2.0)):
        p1 = kickback_one_probability(kick, ancilla_phase, 0.0)
        for _ in range(r):
            ones[s] += int(rng.random() < p1)
            probs.append(p1)
    x1, x2 = ones[0] / r, ones[1] / r
    dp = DeltaPrimeEstimate(_delta_from_means(x1, x2), x1, x2, r)
    bits = [0] * n
    bits[n - 1] = _closer_to_pi(dp.delta_prime)
    for m, k in zip(reps, range(n - 1, 0, -1)):
        p1 = kickback_one_probability(
            (2 ** (k - 1)) * eigenphase, 0.0, _compensation(bits, k, n, dp.delta_prime)
        )
        hits = 0
        for _ in range(m):
            hits += int(rng.random() < p1)
            probs.append(p1)
        bits[k - 1] = _majority(hits, m)
    return bits, dp


def pea_parallel_model(
    eigenphase: float,
    p: float,
    c: float,
    rng: np.random.Generator,
    *,
    r: int | None = None,
    eigenphase_lower_bound: float | None = None,
    B: float = 10.0,
    r_cap: int = DEFAULT_R_CAP,
    w_cost: ResourceLedger | None = None,
    prep_cost: ResourceLedger | None = None,
) -> PhaseEstimate:
    """Statistical model of the entanglement-parallelized PEA.

    Bit ``k`` is read from a GHZ state over ``2**(k-1)`` ancillas, each
    controlling ``W`` on its own copy of the eigenstate. The decoded
    ancilla carries the same relative phase ``2**(k-1) eigenphase`` as the
    sequential kickback, so outcomes are sampled from the same Bernoulli
    probabilities (and the same random draws) as :func:`pea_modified`.

    Ledger: oracle counts equal the sequential run (one eigenstate copy is
    prepared per controlled-W use) while the depth is one layer per bit.
    GHZ encode/decode gates are not charged. If ``eigenphase_lower_bound``
    is given, every copy is first projected by a sequential PEA at precision
    ``eigenphase_lower_bound / 2`` and confidence ``1 - (1 - c) p / B``;
    those preparations run in parallel and add their depth once.
    """
    if not 0 < c < 1:
        raise InvalidOperandError(f"confidence must lie in (0, 1), got {c}")
    w_cost = unit_u() if w_cost is None else w_cost
    prep_cost = unit_prep() if prep_cost is None else prep_cost
    eigenphase = float(eigenphase) % TWO_PI
    n = bits_for_precision(p)
    r = resolve_repetitions(n, c, r, r_cap)
    reps = bit_repetitions(n, r, False)
    probs = []
    bits, dp = _model_modified_run(eigenphase, n, r, reps, rng, probs)

    uses = modified_pea_uses(n, r)
    copy_prep = prep_cost
    if eigenphase_lower_bound is not None:
        eps = float(eigenphase_lower_bound)
        if not 0 < eps <= math.pi:
            raise InvalidOperandError("eigenphase_lower_bound must lie in (0, pi]")
        c_prep = 1.0 - (1.0 - c) * p / B
        n_prep = bits_for_precision(min(1.0, eps / 2.0 / TWO_PI))
        r_prep = resolve_repetitions(n_prep, c_prep, None, r_cap)
        copy_prep = _modified_ledger(
            n_prep, r_prep, bit_repetitions(n_prep, r_prep), w_cost, prep_cost
        )
    layer = w_cost  # one controlled-W per ancilla/copy pair
    ledger = copy_prep.copies(uses) + layer.copies(2 * r * 2 ** (n - 1))
    for m, k in zip(reps, range(n - 1, 0, -1)):
        ledger = ledger + layer.copies(m * 2 ** (k - 1))

    return PhaseEstimate(
        phase=TWO_PI * binary_fraction(bits),
        n_bits=n,
        p=p,
        c=c,
        ledger=ledger,
        bits=tuple(bits),
        r=r,
        delta_prime=dp,
        bit_probabilities=probs,
    )


def nearest_approximations(phase: float, n: int) -> tuple:
    """The two nearest ``n``-bit grid phases (floor and ceiling), in ``[0, 2 pi)``."""
    grid = 2**n
    x = (float(phase) % TWO_PI) / TWO_PI * grid
    lo = math.floor(x) % grid
    hi = (lo + 1) % grid
    return TWO_PI * lo / grid, TWO_PI * hi / grid


def is_acceptable(estimate: float, phase: float, n: int, tol: float = 1e-9) -> bool:
    """Whether ``estimate`` is one of the two nearest ``n``-bit approximations of ``phase``."""
    lo, hi = nearest_approximations(phase, n)
    return circular_distance(estimate, lo) < tol or circular_distance(estimate, hi) < tol
