"""Amplitude and overlap estimation for ``<psi|U|psi>``.

Overlap precision is measured on the upper unit hemisphere: a complex
number ``o`` in the closed unit disk is lifted to
``(Re o, Im o, sqrt(1 - |o|^2))`` and two overlaps are compared by the
great-circle distance between their lifts (radians). For a real amplitude
``a`` the lift sits at polar angle ``arccos(a)`` from the equator.

Amplitude estimation inherits the turn-based precision of phase
estimation: ``amp_estimate(..., p)`` runs PEA at ``2p`` so the arccos of
the returned amplitude is within ``2 pi p`` of the true one (with the
stated confidence), and typically within ``pi p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ledger import ResourceLedger, unit_prep, unit_u
from .oracles import StatePrep, grover_cost, grover_reflection
from .pea import PhaseEstimate, original_pea_uses, pea_modified, pea_original
from .statevec import DenseUnitary, InvalidOperandError, hadamard

DISK_TOL = 1e-9
AMPLITUDE_TOL = 1e-9
PHASE_FLOOR = 1e-6


@dataclass(frozen=True)
class HemispherePoint:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        r2 = self.x1**2 + self.x2**2 + self.x3**2
        if abs(r2 - 1.0) > 1e-9 or self.x3 < 0:
            raise InvalidOperandError(f"({self.x1}, {self.x2}, {self.x3}) is not on the upper hemisphere")

    def h(self) -> complex:
        return complex(self.x1, self.x2)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])


def hemisphere_lift(o: complex) -> HemispherePoint:
    o = complex(o)
    mod = abs(o)
    if mod > 1.0 + DISK_TOL:
        raise InvalidOperandError(f"|{o}| = {mod} exceeds 1")
    if mod > 1.0:
        o /= mod
        mod = 1.0
    return HemispherePoint(o.real, o.imag, math.sqrt(max(0.0, 1.0 - mod * mod)))


def hemisphere_distance(a: complex, b: complex) -> float:
    """Great-circle distance between the lifts of ``a`` and ``b``."""
    pa, pb = hemisphere_lift(a).as_array(), hemisphere_lift(b).as_array()
    # arctan2 form stays accurate for nearly coincident points
    return float(math.atan2(np.linalg.norm(np.cross(pa, pb)), float(pa @ pb)))


@dataclass
class AmplitudeEstimate:
    amplitude: float
    phase: PhaseEstimate
    ledger: ResourceLedger
    p: float
    c: float | None


@dataclass
class OverlapEstimate:
    """``value = e^{i theta} a``. ``y`` is the raw reconstruction used for theta."""

    value: complex
    a: float
    theta: float
    p: float
    c: float | None
    ledger: ResourceLedger
    b0: float = float("nan")
    b_half_pi: float = float("nan")
    y: complex = 0j
    warnings: list = field(default_factory=list)


def amp_estimate(
    u: DenseUnitary,
    v: StatePrep,
    p: float,
    c: float | None,
    rng: np.random.Generator,
    *,
    u_cost: ResourceLedger | None = None,
    prep_cost: ResourceLedger | None = None,
    r: int | None = None,
) -> AmplitudeEstimate:
    """Estimate ``|<psi|U|psi>|`` as ``|cos(phi/2)|`` with ``phi`` from PEA on ``S``.

    ``c=None`` runs the single-shot PEA, otherwise the repeated-measurement
    PEA at confidence ``c``. Each use of ``S`` is charged four state
    preparations and two uses of ``U``; the initial state costs one more
    preparation, i.e. ``4 N(2p) + 1`` and ``2 N(2p)`` for the single-shot case.
    """
    if not 0 < p <= 0.5:
        raise InvalidOperandError(f"amplitude precision must lie in (0, 1/2], got {p}")
    u_cost = unit_u() if u_cost is None else u_cost
    prep_cost = unit_prep() if prep_cost is None else prep_cost
    s = grover_reflection(v, u)
    s_cost = grover_cost(u_cost, prep_cost)
    if c is None:
        ph = pea_original(s, v.target_state, 2 * p, rng, w_cost=s_cost, prep_cost=prep_cost)
    else:
        ph = pea_modified(s, v.target_state, 2 * p, c, rng, w_cost=s_cost,
                          prep_cost=prep_cost, r=r)
    amp = abs(math.cos(ph.phase / 2.0))
    return AmplitudeEstimate(amplitude=min(1.0, amp), phase=ph, ledger=ph.ledger, p=p, c=c)


def reconstruct_y(a: float, b0: float, b_half_pi: float) -> complex:
    """Overlap from ``a = |o|``, ``b0 = |1 + o|/2`` and ``b_half_pi = |1 - i o|/2``."""
    for name, val in (("a", a), ("b0", b0), ("b_half_pi", b_half_pi)):
        if not -AMPLITUDE_TOL <= val <= 1.0 + AMPLITUDE_TOL:
            raise InvalidOperandError(f"{name}={val} is outside [0, 1]")
    re = (4.0 * b0 * b0 - a * a - 1.0) / 2.0
    im = (4.0 * b_half_pi * b_half_pi - a * a - 1.0) / 2.0
    return complex(re, im)


def controlled_overlap_ops(u: DenseUnitary, v: StatePrep):
    """The two auxiliary problems whose amplitudes fix the overlap's phase.

    Returns ``(cU, e^{i sigma_z pi/4} cU, V')`` on ancilla + system with the
    ancilla as qubit 0 and ``V' = H (x) V`` preparing ``|+>|psi>``. Then
    ``<+psi|cU|+psi> = (1 + o)/2`` and
    ``<+psi|e^{i sigma_z pi/4} cU|+psi> = e^{i pi/4} (1 - i o)/2``.
    """
    cu = u.controlled()
    z_quarter = np.kron(np.diag([np.exp(1j * math.pi / 4), np.exp(-1j * math.pi / 4)]),
                        np.eye(u.dim))
    tilted = DenseUnitary(z_quarter @ cu.matrix)
    prep = StatePrep(hadamard().kron(v.v))
    return cu, tilted, prep


def overlap_estimate(
    u: DenseUnitary,
    v: StatePrep,
    p: float,
    c: float | None,
    rng: np.random.Generator,
    *,
    u_cost: ResourceLedger | None = None,
    prep_cost: ResourceLedger | None = None,
) -> OverlapEstimate:
    """Estimate ``<psi|U|psi>`` to hemisphere precision ``p``.

    Three amplitude estimates (precisions ``p/4``, ``p/16``, ``p/16``, each at
    confidence ``1 - (1-c)/3``) give ``a``, ``b0`` and ``b_half_pi``; the
    phase comes from :func:`reconstruct_y` and the modulus from ``a``.
    The three estimates are independent, so the ledger composes them in
    parallel. With ``c=None`` (single-shot PEA) the charge is exactly
    ``8 N(p/8) + 4 N(p/2) + 3`` preparations and ``4 N(p/8) + 2 N(p/2)`` uses of U.
    """
    if not 0 < p <= 1:
        raise InvalidOperandError(f"precision must lie in (0, 1], got {p}")
    if c is not None and not 0 < c < 1:
        raise InvalidOperandError(f"confidence must lie in (0, 1), got {c}")
    if u.dim != v.v.dim:
        raise InvalidOperandError(f"unitary dim {u.dim} does not match state dim {v.v.dim}")
    u_cost = unit_u() if u_cost is None else u_cost
    prep_cost = unit_prep() if prep_cost is None else prep_cost
    c_sub = None if c is None else 1.0 - (1.0 - c) / 3.0

    cu, tilted, prep_plus = controlled_overlap_ops(u, v)
    kw = dict(u_cost=u_cost, prep_cost=prep_cost)
    est_a = amp_estimate(u, v, p / 4.0, c_sub, rng, **kw)
    est_b0 = amp_estimate(cu, prep_plus, p / 16.0, c_sub, rng, **kw)
    est_bh = amp_estimate(tilted, prep_plus, p / 16.0, c_sub, rng, **kw)
    a, b0, bh = est_a.amplitude, est_b0.amplitude, est_bh.amplitude

    y = reconstruct_y(a, b0, bh)
    warnings = []
    if abs(y) < PHASE_FLOOR:
        theta = 0.0
        warnings.append(f"|y| = {abs(y):.2e} below {PHASE_FLOOR:g}; phase set to 0")
    else:
        theta = math.atan2(y.imag, y.real)
    value = a * complex(math.cos(theta), math.sin(theta))
    ledger = ResourceLedger.parallel([est_a.ledger, est_b0.ledger, est_bh.ledger])
    return OverlapEstimate(
        value=value, a=a, theta=theta, p=p, c=c, ledger=ledger,
        b0=b0, b_half_pi=bh, y=y, warnings=warnings,
    )


def amp_ledger_formula(p: float) -> tuple:
    """``(4 N(2p) + 1, 2 N(2p))`` preparations and U-uses of single-shot AE."""
    n = original_pea_uses(2 * p)
    return 4 * n + 1, 2 * n


def overlap_ledger_formula(p: float) -> tuple:
    """``(8 N(p/8) + 4 N(p/2) + 3, 4 N(p/8) + 2 N(p/2))`` for single-shot OE."""
    n8, n2 = original_pea_uses(p / 8), original_pea_uses(p / 2)
    return 8 * n8 + 4 * n2 + 3, 4 * n8 + 2 * n2
