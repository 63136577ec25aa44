"""Hoeffding bounds, repetition counts and confidence-budget bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_R_CAP = 100_000


class ResourceLimitError(RuntimeError):
    """The repetition count needed for a confidence goal exceeds the configured cap."""


def clamp_probability(x: float) -> float:
    return min(1.0, max(0.0, float(x)))


def hoeffding_bound(r: int, x: float) -> float:
    """Two-sided Hoeffding bound ``2 exp(-2 r x^2)`` on a sample mean of ``r`` bits.

    The raw value is returned (it can exceed 1); use :func:`clamp_probability`
    when reporting it as a probability.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if not 0 < x <= 1:
        raise ValueError(f"deviation x must lie in (0, 1], got {x}")
    return 2.0 * math.exp(-2.0 * r * x * x)


def failure_bound(n: int, r: int) -> float:
    """Failure probability bound of the repeated-measurement phase estimate.

    ``2 (n-1) e^{-r/2} + 4 e^{-r/8}``: the first term covers majority votes
    on bits ``n-1..1`` and the second the initial two-quadrature estimate.
    """
    if n < 1 or r < 1:
        raise ValueError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
    return 2.0 * (n - 1) * math.exp(-r / 2.0) + 4.0 * math.exp(-r / 8.0)


def select_r(n: int, c: float, cap: int = DEFAULT_R_CAP) -> int:
    """Smallest ``r`` with ``failure_bound(n, r) < 1 - c``."""
    if not 0 < c < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {c}")
    target = 1.0 - c
    # failure_bound is decreasing in r, so bisect on [1, cap]
    if failure_bound(n, cap) >= target:
        raise ResourceLimitError(
            f"confidence {c} for n={n} needs more than r_cap={cap} repetitions"
        )
    lo, hi = 1, cap
    if failure_bound(n, lo) < target:
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if failure_bound(n, mid) < target:
            hi = mid
        else:
            lo = mid
    return hi


def stage1_repetitions(c: float, cap: int = DEFAULT_R_CAP) -> int:
    """Smallest ``r`` with ``2 e^{-r/8} <= (1-c)/4`` (median-of-PEA initialization)."""
    if not 0 < c < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {c}")
    r = max(1, math.ceil(8.0 * math.log(8.0 / (1.0 - c))))
    while r > 1 and 2.0 * math.exp(-(r - 1) / 8.0) <= (1.0 - c) / 4.0:
        r -= 1
    while 2.0 * math.exp(-r / 8.0) > (1.0 - c) / 4.0:
        r += 1
    if r > cap:
        raise ResourceLimitError(f"confidence {c} needs r={r} > r_cap={cap}")
    return r


@dataclass
class ConfidenceBudget:
    """Splits an overall failure probability ``1 - c`` among sub-procedures.

    Each allocation consumes ``share`` of the total failure probability and
    returns the confidence level the sub-procedure must be run at.
    """

    total: float
    allocations: list = field(default_factory=list)

    def __post_init__(self):
        if not 0 < self.total < 1:
            raise ValueError(f"confidence must lie in (0, 1), got {self.total}")

    @property
    def failure(self) -> float:
        return 1.0 - self.total

    @property
    def spent(self) -> float:
        return sum(1.0 - ci for _, ci in self.allocations)

    def allocate(self, label: str, share: float) -> float:
        if share <= 0:
            raise ValueError("share must be positive")
        sub_failure = self.failure * share
        if self.spent + sub_failure > self.failure * (1 + 1e-12):
            raise ValueError(
                f"allocating {label!r} would exceed the failure budget {self.failure:g}"
            )
        ci = 1.0 - sub_failure
        self.allocations.append((label, ci))
        return ci

    def split(self, label: str, k: int) -> float:
        """Allocate ``k`` equal shares and return the common sub-confidence."""
        ci = 1.0 - self.failure / k
        for i in range(k):
            self.allocate(f"{label}[{i}]", 1.0 / k)
        return ci
