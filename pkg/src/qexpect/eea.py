"""Expectation estimation for ``<A> = <psi|A|psi>`` from evolutions ``e^{-iAt}``.

Stage I (or the logarithmic-search Stage I') pins ``<A>`` down to a
deviation scale ``Delta`` set by the tail model; Stage II (or the
higher-order Stage II') then reads ``<A>`` off the imaginary part of
overlaps ``<psi|e^{-i(A - a0) s}|psi>`` at small ``s``.

Units: ``p`` and ``Delta`` are in the units of ``A``; ``t`` is inverse
energy. The ``offset`` of an :class:`~qexpect.oracles.EvolutionOracle`
passed in is ignored; every stage sets its own offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.special

from .amp_overlap import overlap_estimate
from .confidence import DEFAULT_R_CAP, stage1_repetitions
from .ledger import ResourceLedger, evolution_cost
from .oracles import EvolutionOracle, StatePrep, exp_at
from .pea import TWO_PI, pea_modified, wrap_signed
from .statevec import DenseUnitary, InvalidOperandError

TAIL_KINDS = ("bounded", "exponential", "polynomial", "variance", "point")
MAX_K = 20
GRID_STEPS = 400
SOLVER_TOL = 1e-12
FALLBACK_GRID = 64


class InfeasibleError(ValueError):
    """No parameters satisfy a stage's constraints; ``constraint`` names the culprit."""

    def __init__(self, constraint: str, message: str):
        super().__init__(f"constraint {constraint}: {message}")
        self.constraint = constraint


class ContractionError(RuntimeError):
    """Stage I' failed to halve its precision bound (should be unreachable)."""


# ---------------------------------------------------------------------------
# Tail models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailModel:
    """Prior knowledge of the eigenvalue spread of ``A`` in ``|psi>``.

    ``F(D)`` bounds the weight of eigenvalues farther than ``D`` from
    ``<A>``, ``G(D)`` their contribution to the mean. ``b`` bounds ``|<A>|``.

    Kinds and parameters:

    * ``bounded``: ``lambda_max`` bounds ``|lambda - <A>|``; ``F = [D < lambda_max]``.
    * ``exponential``: ``F = min(1, e^{1 - D/scale})``.
    * ``polynomial``: ``F = min(1, coefficient / D^{2+beta})``.
    * ``variance``: ``F = min(1, variance / D^2)`` (polynomial with ``beta = 0``).
    * ``point``: ``|psi>`` is an eigenstate, ``F = G = 0``.
    """

    kind: str
    b: float = 1.0
    lambda_max: float | None = None
    scale: float | None = None
    beta: float | None = None
    coefficient: float | None = None
    variance: float | None = None

    def __post_init__(self):
        if self.kind not in TAIL_KINDS:
            raise InvalidOperandError(f"unknown tail kind {self.kind!r}; expected one of {TAIL_KINDS}")
        if not (self.b >= 0 and math.isfinite(self.b)):
            raise InvalidOperandError(f"b must be finite and >= 0, got {self.b}")
        required = {
            "bounded": ("lambda_max",),
            "exponential": ("scale",),
            "polynomial": ("beta", "coefficient"),
            "variance": ("variance",),
            "point": (),
        }[self.kind]
        for name in required:
            val = getattr(self, name)
            if val is None:
                raise InvalidOperandError(f"{self.kind} tail needs {name}")
            lower_ok = val >= 0 if name == "beta" else val > 0
            if not (lower_ok and math.isfinite(val)):
                raise InvalidOperandError(f"{name} must be finite and positive, got {val}")

    @classmethod
    def bounded(cls, lambda_max: float, b: float = 1.0) -> "TailModel":
        return cls("bounded", b=b, lambda_max=lambda_max)

    @classmethod
    def exponential(cls, scale: float, b: float = 1.0) -> "TailModel":
        return cls("exponential", b=b, scale=scale)

    @classmethod
    def polynomial(cls, beta: float, coefficient: float, b: float = 1.0) -> "TailModel":
        return cls("polynomial", b=b, beta=beta, coefficient=coefficient)

    @classmethod
    def variance_bound(cls, variance: float, b: float = 1.0) -> "TailModel":
        return cls("variance", b=b, variance=variance)

    @classmethod
    def point(cls, b: float = 1.0) -> "TailModel":
        return cls("point", b=b)

    def _power_law(self):
        """``(beta, coefficient)`` for the polynomial family."""
        if self.kind == "variance":
            return 0.0, self.variance
        return self.beta, self.coefficient

    def F(self, delta: float) -> float:
        return tail_F(self, delta)

    def G(self, delta: float) -> float:
        return tail_G(self, delta)

    def Ginv(self, x: float) -> float:
        return tail_Ginv(self, x)

    def to_config(self) -> dict:
        """Key-value form, e.g. ``{"kind": "bounded", "b": "1.0", "lambda_max": "2.0"}``."""
        out = {"kind": self.kind, "b": repr(float(self.b))}
        for name in ("lambda_max", "scale", "beta", "coefficient", "variance"):
            val = getattr(self, name)
            if val is not None:
                out[name] = repr(float(val))
        return out

    @classmethod
    def from_config(cls, block) -> "TailModel":
        """Inverse of :meth:`to_config`; accepts any string mapping (``v`` aliases ``variance``)."""
        data = {str(k).strip().lower(): str(v).strip() for k, v in dict(block).items()}
        if "kind" not in data:
            raise InvalidOperandError("tail block needs a 'kind' key")
        if "v" in data and "variance" not in data:
            data["variance"] = data.pop("v")
        kw = {}
        for name in ("b", "lambda_max", "scale", "beta", "coefficient", "variance"):
            if name in data:
                try:
                    kw[name] = float(data.pop(name))
                except ValueError:
                    raise InvalidOperandError(f"tail key {name!r} is not a number") from None
        kind = data.pop("kind")
        if data:
            raise InvalidOperandError(f"unknown tail keys: {sorted(data)}")
        return cls(kind, **kw)


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not delta >= 0:
        raise InvalidOperandError(f"delta must be >= 0, got {delta}")
    return delta


def tail_F(model: TailModel, delta: float) -> float:
    delta = _check_delta(delta)
    kind = model.kind
    if kind == "point":
        return 0.0
    if kind == "bounded":
        return 1.0 if delta < model.lambda_max else 0.0
    if kind == "exponential":
        return min(1.0, math.exp(1.0 - delta / model.scale))
    beta, kappa = model._power_law()
    if delta == 0:
        return 1.0
    return min(1.0, kappa / delta ** (2.0 + beta))


def tail_G(model: TailModel, delta: float) -> float:
    """``G(D) = D F(D) + int_D^inf F(s) ds`` in closed form."""
    delta = _check_delta(delta)
    kind = model.kind
    if kind == "point":
        return 0.0
    if kind == "bounded":
        return model.lambda_max if delta < model.lambda_max else 0.0
    if kind == "exponential":
        s = model.scale
        if delta <= s:
            return 2.0 * s
        return (delta + s) * math.exp(1.0 - delta / s)
    beta, kappa = model._power_law()
    d0 = kappa ** (1.0 / (2.0 + beta))
    ratio = (2.0 + beta) / (1.0 + beta)
    if delta <= d0:
        return d0 * ratio
    return kappa * ratio * delta ** (-(1.0 + beta))


def tail_Ginv(model: TailModel, x: float) -> float:
    """``inf{D | G(D) <= x}``."""
    x = float(x)
    if not x > 0:
        raise InvalidOperandError(f"G^-1 needs x > 0, got {x}")
    kind = model.kind
    if kind == "point":
        return 0.0
    if kind == "bounded":
        return model.lambda_max if x < model.lambda_max else 0.0
    if kind == "exponential":
        s = model.scale
        if x >= 2.0 * s:
            return 0.0
        # s (u+1) e^{1-u} = x with u = D/s  <=>  -(u+1) = W_{-1}(-x / (s e^2))
        w = scipy.special.lambertw(-x / (s * math.e**2), k=-1).real
        return float(s * (-w - 1.0))
    beta, kappa = model._power_law()
    d0 = kappa ** (1.0 / (2.0 + beta))
    ratio = (2.0 + beta) / (1.0 + beta)
    if x >= d0 * ratio:
        return 0.0
    return (kappa * ratio / x) ** (1.0 / (1.0 + beta))


# ---------------------------------------------------------------------------
# Truncated log series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesCoefficients:
    """``sum_k (-1)^{k-1} (z - 1)^k / k = sum_l c[l] z^l`` for ``k = 1..K``."""

    K: int
    c: np.ndarray

    def evaluate(self, theta: float) -> complex:
        z = np.exp(-1j * theta * np.arange(self.K + 1))
        return complex(self.c @ z)


def series_coefficients(K: int) -> SeriesCoefficients:
    if not (isinstance(K, (int, np.integer)) and 1 <= K <= MAX_K):
        raise InvalidOperandError(f"K must be an integer in [1, {MAX_K}], got {K}")
    K = int(K)
    coeffs = []
    for l in range(K + 1):
        total = sum(Fraction(math.comb(k, l), k) for k in range(max(l, 1), K + 1))
        coeffs.append(float((-1) ** (l + 1) * total))
    return SeriesCoefficients(K, np.array(coeffs))


def truncated_log(x: complex, K: int) -> complex:
    return sum((-1) ** (k - 1) * x**k / k for k in range(1, K + 1))


def log_remainder_bound(x_abs: float, K: int) -> float:
    """``|x|^{K+1} / ((K+1)(1-|x|)^{K+1})`` for ``|x| < 1``."""
    if not 0 <= x_abs < 1:
        raise InvalidOperandError(f"need |x| < 1, got {x_abs}")
    return x_abs ** (K + 1) / ((K + 1) * (1.0 - x_abs) ** (K + 1))


# ---------------------------------------------------------------------------
# Stage II parameter solver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StageIIParams:
    theta_max: float
    t: float
    K: int
    delta: float
    p: float


def _tail_budget(theta: float, p: float, K: int) -> float:
    return theta * p / 8.0 if K == 1 else theta * p / (8.0 * K * 2**K)


def _approx_error(theta: float, K: int) -> float:
    if K == 1:
        return theta**3 / 6.0
    return theta ** (K + 1) / ((K + 1) * (1.0 - theta) ** (K + 1))


def stage2_predicates(model: TailModel, params: StageIIParams, rtol: float = 1e-12) -> dict:
    """The four stage-II constraints evaluated directly.

    (A) series/Taylor error ``<= (t/2) p / 4``; (B) ``G(theta/t) <=`` the tail
    budget; (C) ``theta <= 1`` (and ``<= 1/(K+1)`` for ``K >= 2``);
    (D) ``t Delta <= theta``.
    """
    th, t, K, delta, p = params.theta_max, params.t, params.K, params.delta, params.p
    cap = 1.0 if K == 1 else 1.0 / (K + 1)
    slack = 1.0 + rtol
    return {
        "A": _approx_error(th, K) <= (t / 2.0) * p / 4.0 * slack,
        "B": tail_G(model, th / t) <= _tail_budget(th, p, K) * slack,
        "C": 0 < th <= cap * slack,
        "D": t * delta <= th * slack,
    }


def solve_stage2(model: TailModel, p: float, delta: float, K: int = 1) -> StageIIParams:
    """Largest ``theta_max`` (and the matching ``t``) meeting the stage-II constraints.

    With ``D(theta) = max(Delta, G^-1(budget(theta)))`` and ``t = theta / D``,
    constraints (B) and (D) hold by construction and (A) becomes
    ``D(theta) <= rhs(theta)``. When ``Delta <= G^-1`` this is the familiar
    ``G^-1(budget) <= rhs`` condition, e.g. ``theta = sqrt(3p/(4 lambda_max))``
    for bounded tails with ``K = 1``.
    """
    if not (isinstance(K, (int, np.integer)) and 1 <= K <= MAX_K):
        raise InvalidOperandError(f"K must be an integer in [1, {MAX_K}], got {K}")
    if not 0 < p <= delta * (1 + 1e-12):
        raise InvalidOperandError(f"need 0 < p <= delta, got p={p}, delta={delta}")
    K = int(K)
    cap = 1.0 if K == 1 else 1.0 / (K + 1)

    def d_of(theta):
        return max(delta, tail_Ginv(model, _tail_budget(theta, p, K)))

    def log_rhs(theta):
        # log of the largest D meeting (A); log form avoids underflow of theta**K
        if K == 1:
            return math.log(6.0 * p / 8.0) - 2.0 * math.log(theta)
        return math.log((p / 8.0) * (K + 1)) + (K + 1) * math.log1p(-theta) - K * math.log(theta)

    def feasible(theta):
        if _tail_budget(theta, p, K) <= 0.0:
            return False
        try:
            return math.log(d_of(theta)) <= log_rhs(theta)
        except OverflowError:
            return False

    def bisect(lo, hi):
        # lo feasible, hi infeasible
        for _ in range(200):
            if hi - lo <= SOLVER_TOL * hi:
                break
            mid = 0.5 * (lo + hi)
            if feasible(mid):
                lo = mid
            else:
                hi = mid
        return lo

    if feasible(cap):
        theta = cap
    else:
        lo = cap
        for _ in range(1100):
            lo *= 0.5
            if lo == 0.0 or feasible(lo):
                break
        if lo == 0.0 or not feasible(lo):
            raise InfeasibleError(
                "A''", f"no theta_max in (0, {cap:g}] has max(Delta, G^-1) <= the approximation budget "
                f"(Delta={delta:g}, p={p:g}, K={K})"
            )
        theta = bisect(lo, min(2.0 * lo, cap))
        # guard against non-monotone tails: look for a larger feasible theta
        grid = np.linspace(cap / FALLBACK_GRID, cap, FALLBACK_GRID)
        better = [g for g in grid if g > theta and feasible(g)]
        if better:
            g = max(better)
            nxt = grid[grid > g]
            theta = g if len(nxt) == 0 else bisect(g, float(nxt[0]))

    t = float(theta / d_of(theta))
    if not t > 0:
        raise InfeasibleError("A''", f"t underflows at theta_max={theta:g} (Delta={delta:g}, p={p:g})")
    params = StageIIParams(theta_max=float(theta), t=t, K=K, delta=delta, p=p)
    for name, ok in stage2_predicates(model, params).items():
        if not ok:
            raise InfeasibleError(name, f"solver output {params} violates it")
    return params


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def _grid(base: float, accept, what: str) -> float:
    for j in range(GRID_STEPS):
        d = base * 2.0**j
        if accept(d):
            return d
    raise InfeasibleError(what, f"no Delta on the grid {base:g} * 2^j (j < {GRID_STEPS}) qualifies")


def stage1_delta(model: TailModel, p: float) -> float:
    """Smallest ``Delta = p 2^j`` with ``F(Delta/2) < 1/4``."""
    return _grid(p, lambda d: tail_F(model, d / 2.0) < 0.25, "F(Delta/2) < 1/4")


def stage1_log_delta(model: TailModel, base: float) -> float:
    """Smallest ``Delta = base 2^j`` with ``G(Delta) < Delta/6`` and ``F(Delta) < 1/18``."""
    return _grid(
        base,
        lambda d: tail_G(model, d) < d / 6.0 and tail_F(model, d) < 1.0 / 18.0,
        "G(Delta) < Delta/6 and F(Delta) < 1/18",
    )


@dataclass
class StageOneResult:
    a0: float
    delta: float
    ledger: ResourceLedger
    t_i: float
    r: int
    c_prime: float
    pe_precision: float
    samples: list = field(default_factory=list)


def stage1(
    evolution: EvolutionOracle,
    v: StatePrep,
    model: TailModel,
    p: float,
    c: float,
    rng: np.random.Generator,
    *,
    delta: float | None = None,
    r_cap: int = DEFAULT_R_CAP,
) -> StageOneResult:
    """Median of ``r`` phase estimates of ``e^{-iA t_i}`` on ``|psi>``.

    Each estimate must land within ``Delta t_i / 2`` radians of a sampled
    eigenphase; since phase-estimation precision is in turns it is called
    at ``Delta t_i / (4 pi)``. ``P(|a0 - <A>| > Delta) <= (1-c)/2``.
    """
    _check_pc(p, c)
    delta = stage1_delta(model, p) if delta is None else float(delta)
    if delta < p:
        raise InvalidOperandError(f"Delta={delta} must be >= p={p}")
    t_i = math.pi / (4.0 * (model.b + delta))
    r = stage1_repetitions(c, cap=r_cap)
    if r % 2 == 0:
        r += 1
    c_prime = 1.0 - (1.0 - c) / (4.0 * r)
    pe_p = delta * t_i / (2.0 * TWO_PI)
    w = exp_at(evolution, t_i)
    w_cost = evolution_cost(t_i)
    samples, ledgers = [], []
    for _ in range(r):
        est = pea_modified(w, v.target_state, pe_p, c_prime, rng, w_cost=w_cost, r_cap=r_cap)
        samples.append(wrap_signed(est.phase))
        ledgers.append(est.ledger)
    median = sorted(samples)[(r - 1) // 2]
    return StageOneResult(
        a0=-median / t_i, delta=delta, ledger=ResourceLedger.parallel(ledgers),
        t_i=t_i, r=r, c_prime=c_prime, pe_precision=pe_p, samples=samples,
    )


@dataclass
class StageOneLogResult:
    a: float
    delta: float
    ledger: ResourceLedger
    q: float
    max_iterations: int
    p_history: list = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.p_history) - 1


def stage1_log(
    evolution: EvolutionOracle,
    v: StatePrep,
    model: TailModel,
    c: float,
    rng: np.random.Generator,
    *,
    min_delta: float = 2.0**-20,
    delta: float | None = None,
    suppress_overlap: bool = False,
) -> StageOneLogResult:
    """Logarithmic search: shrink the uncertainty ``p_a`` from ``b`` to ``Delta``.

    Every iteration estimates ``<psi|e^{-i(A-a)t}|psi>`` at ``t = 1/(p_a + Delta)``
    and sets ``a <- a - Im(x)/t``, ``p_a <- Delta/6 + (5/18)(p_a + Delta)``.
    ``Delta`` defaults to the smallest ``min_delta * 2^j`` meeting the tail
    conditions. Precondition ``|<A>| <= b``.
    """
    if not 0 < c < 1:
        raise InvalidOperandError(f"confidence must lie in (0, 1), got {c}")
    delta = stage1_log_delta(model, min_delta) if delta is None else float(delta)
    if not delta > 0:
        raise InvalidOperandError(f"Delta must be positive, got {delta}")
    q = model.b / delta
    max_iter = math.ceil(math.log2(q)) if q > 1 else 0
    c_iter = 1.0 - (1.0 - c) / (2.0 * max(1, max_iter))
    a, p_a = 0.0, float(model.b)
    history = [p_a]
    ledger = ResourceLedger()
    while p_a > delta:
        t = 1.0 / (p_a + delta)
        u = exp_at(evolution.with_offset(a), t)
        x, led = _overlap(u, v, 1.0 / 18.0, c_iter, rng, evolution_cost(t), suppress_overlap)
        ledger = ledger + led
        a -= x.imag / t
        new_p = delta / 6.0 + (5.0 / 18.0) * (p_a + delta)
        if p_a >= 2.0 * delta and new_p > 0.5 * p_a * (1 + 1e-12):
            raise ContractionError(f"p_a {p_a:g} -> {new_p:g} did not halve (Delta={delta:g})")
        p_a = new_p
        history.append(p_a)
        if len(history) - 1 > max_iter:
            raise ContractionError(f"more than ceil(log2 q) = {max_iter} iterations")
    return StageOneLogResult(a=a, delta=delta, ledger=ledger, q=q, max_iterations=max_iter,
                             p_history=history)


def suppressed_operands(u: DenseUnitary, v: StatePrep):
    """Operands whose overlap is ``(1 + <psi|U|psi>)/2``.

    A maximally mixed control qubit is purified by an environment qubit:
    the register is ancilla (qubit 0), environment (qubit 1), system, prepared
    in a Bell pair times ``|psi>``, and ``U`` acts on the system when the
    ancilla is ``|1>``.
    """
    bell = np.array([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, -1]], dtype=complex)
    bell = DenseUnitary(bell.T / math.sqrt(2))
    prep = StatePrep(bell.kron(v.v))
    d = u.dim
    m = np.zeros((4 * d, 4 * d), dtype=complex)
    m[: 2 * d, : 2 * d] = np.eye(2 * d)
    m[2 * d:, 2 * d:] = np.kron(np.eye(2), u.matrix)
    return DenseUnitary(m), prep


def _overlap(u, v, precision, c, rng, u_cost, suppress):
    if not suppress:
        est = overlap_estimate(u, v, precision, c, rng, u_cost=u_cost)
        return est.value, est.ledger
    u2, v2 = suppressed_operands(u, v)
    est = overlap_estimate(u2, v2, precision / 2.0, c, rng, u_cost=u_cost)
    return 2.0 * est.value - 1.0, est.ledger


@dataclass
class StageTwoResult:
    value: float
    ledger: ResourceLedger
    overlaps: list = field(default_factory=list)


def stage2(
    evolution: EvolutionOracle,
    v: StatePrep,
    a0: float,
    params: StageIIParams,
    p: float,
    c: float,
    rng: np.random.Generator,
    *,
    suppress_overlap: bool = False,
) -> StageTwoResult:
    """``-Im(x)/(t/2) + a0`` with ``x`` the overlap of ``e^{-i(A-a0)t/2}``."""
    _check_pc(p, c)
    half = params.t / 2.0
    u = exp_at(evolution.with_offset(a0), half)
    x, ledger = _overlap(u, v, half * p / 4.0, 1.0 - (1.0 - c) / 2.0, rng,
                         evolution_cost(half), suppress_overlap)
    return StageTwoResult(value=-x.imag / half + a0, ledger=ledger, overlaps=[x])


def stage2_prime(
    evolution: EvolutionOracle,
    v: StatePrep,
    a0: float,
    params: StageIIParams,
    p: float,
    c: float,
    rng: np.random.Generator,
    *,
    suppress_overlap: bool = False,
) -> StageTwoResult:
    """``-Im(sum_l C_l y_l)/(t/2) + a0`` from ``K`` overlaps at times ``l t/2``.

    The ``K`` overlap estimates are independent and charged in parallel.
    """
    _check_pc(p, c)
    K = params.K
    if K < 2:
        raise InvalidOperandError("stage2_prime needs K >= 2")
    coeffs = series_coefficients(K)
    half = params.t / 2.0
    precision = half * p / (4.0 * K * 2**K)
    c_sub = 1.0 - (1.0 - c) / (2.0 * K)
    shifted = evolution.with_offset(a0)
    ys, ledgers = [1.0 + 0j], []
    for l in range(1, K + 1):
        u = exp_at(shifted, l * half)
        y, led = _overlap(u, v, precision, c_sub, rng, evolution_cost(l * half), suppress_overlap)
        ys.append(y)
        ledgers.append(led)
    total = complex(coeffs.c @ np.array(ys))
    return StageTwoResult(value=-total.imag / half + a0, ledger=ResourceLedger.parallel(ledgers),
                          overlaps=ys)


# ---------------------------------------------------------------------------
# Full algorithm
# ---------------------------------------------------------------------------


@dataclass
class EstimateResult:
    """Estimate of ``<A>`` with its goals and the resources charged."""

    value: float
    p: float
    c: float
    ledger: ResourceLedger
    a0: float = float("nan")
    delta: float = float("nan")
    params: StageIIParams | None = None
    stage2_skipped: bool = False
    stage1: object = None


def default_K(p: float) -> int:
    return min(MAX_K, max(2, math.ceil(math.log2(1.0 / p))))


def _check_pc(p, c):
    if not p > 0:
        raise InvalidOperandError(f"precision must be positive, got {p}")
    if not 0 < c < 1:
        raise InvalidOperandError(f"confidence must lie in (0, 1), got {c}")


def eea_full(
    evolution: EvolutionOracle,
    v: StatePrep,
    model: TailModel,
    p: float,
    c: float,
    rng: np.random.Generator,
    *,
    use_stage1_log: bool = False,
    K: int | None = None,
    suppress_overlap: bool = False,
    delta: float | None = None,
) -> EstimateResult:
    """Estimate ``<psi|A|psi>`` to within ``p`` with confidence ``c``.

    ``K = 1`` uses the Taylor-based Stage II, ``K >= 2`` the log-series
    Stage II' (default ``max(2, ceil(log2(1/p)))``). When the initial stage
    already reaches ``Delta <= p`` (e.g. the point model) Stage II is skipped.
    ``suppress_overlap`` halves every overlap via a mixed control qubit.
    """
    _check_pc(p, c)
    if evolution.dim != v.v.dim:
        raise InvalidOperandError(f"A has dim {evolution.dim}, state prep dim {v.v.dim}")
    K = default_K(p) if K is None else K
    if use_stage1_log:
        s1 = stage1_log(evolution, v, model, c, rng, min_delta=p, delta=delta,
                        suppress_overlap=suppress_overlap)
        a0 = s1.a
    else:
        s1 = stage1(evolution, v, model, p, c, rng, delta=delta)
        a0 = s1.a0
    if s1.delta <= p:
        return EstimateResult(value=a0, p=p, c=c, ledger=s1.ledger, a0=a0, delta=s1.delta,
                              stage2_skipped=True, stage1=s1)
    params = solve_stage2(model, p, s1.delta, K)
    run = stage2 if K == 1 else stage2_prime
    s2 = run(evolution, v, a0, params, p, c, rng, suppress_overlap=suppress_overlap)
    return EstimateResult(value=s2.value, p=p, c=c, ledger=s1.ledger + s2.ledger, a0=a0,
                          delta=s1.delta, params=params, stage1=s1)


__all__ = [
    "ContractionError",
    "EstimateResult",
    "InfeasibleError",
    "SeriesCoefficients",
    "StageIIParams",
    "StageOneLogResult",
    "StageOneResult",
    "StageTwoResult",
    "TailModel",
    "default_K",
    "eea_full",
    "log_remainder_bound",
    "series_coefficients",
    "solve_stage2",
    "stage1",
    "stage1_delta",
    "stage1_log",
    "stage1_log_delta",
    "stage2",
    "stage2_predicates",
    "stage2_prime",
    "suppressed_operands",
    "tail_F",
    "tail_G",
    "tail_Ginv",
    "truncated_log",
]
