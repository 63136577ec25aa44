"""Resource accounting for oracle-based estimation algorithms."""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass
class ResourceLedger:
    """Counts of oracle uses charged to an estimate.

    ``state_preps`` is N (uses of the preparation unitary V or its inverse),
    ``evolution_uses`` is M (uses of some ``e^{-iAs}``), ``total_time`` is T
    (sum of ``|s|`` over those uses), ``u_uses`` counts uses of the unitary
    whose overlap is estimated, and ``depth`` is the longest chain of
    sequential oracle uses.

    ``a + b`` composes sequentially (depths add); ``a | b`` composes in
    parallel (depth is the max). Counts always add.
    """

    state_preps: int = 0
    evolution_uses: int = 0
    total_time: float = 0.0
    u_uses: int = 0
    depth: int = 0

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be non-negative")

    def _counts_plus(self, other: "ResourceLedger", depth: int) -> "ResourceLedger":
        return ResourceLedger(
            state_preps=self.state_preps + other.state_preps,
            evolution_uses=self.evolution_uses + other.evolution_uses,
            total_time=self.total_time + other.total_time,
            u_uses=self.u_uses + other.u_uses,
            depth=depth,
        )

    def __add__(self, other: "ResourceLedger") -> "ResourceLedger":
        return self._counts_plus(other, self.depth + other.depth)

    def __or__(self, other: "ResourceLedger") -> "ResourceLedger":
        return self._counts_plus(other, max(self.depth, other.depth))

    def times(self, k: int) -> "ResourceLedger":
        """``k`` sequential repetitions."""
        return ResourceLedger(
            state_preps=k * self.state_preps,
            evolution_uses=k * self.evolution_uses,
            total_time=k * self.total_time,
            u_uses=k * self.u_uses,
            depth=k * self.depth,
        )

    def copies(self, k: int) -> "ResourceLedger":
        """``k`` independent repetitions run side by side."""
        out = self.times(k)
        out.depth = self.depth if k > 0 else 0
        return out

    def charge(self, other: "ResourceLedger") -> None:
        """In-place sequential accumulation."""
        merged = self + other
        for f in fields(self):
            setattr(self, f.name, getattr(merged, f.name))

    @classmethod
    def parallel(cls, ledgers) -> "ResourceLedger":
        out = cls()
        for led in ledgers:
            out = out | led
        return out

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def unit_prep() -> ResourceLedger:
    """Cost of one use of a state-preparation unitary."""
    return ResourceLedger(state_preps=1, depth=1)


def unit_u() -> ResourceLedger:
    """Cost of one use of an abstract unitary oracle."""
    return ResourceLedger(u_uses=1, depth=1)


def evolution_cost(t: float) -> ResourceLedger:
    """Cost of one use of ``e^{-iAt}`` when it plays the role of the overlap unitary."""
    return ResourceLedger(evolution_uses=1, total_time=abs(float(t)), u_uses=1, depth=1)
