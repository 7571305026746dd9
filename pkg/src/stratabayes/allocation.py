"""Budget allocation across strata, Newbold's Bayesian variant of Neyman.

Each stratum carries a presample posterior; its mean P_i and the stratum's
population fraction feed a heterogeneity factor, and the sampling budget is
split in proportion to sqrt(cost * factor * (presample_size + 1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import GridDensity


class DegenerateAllocationError(ValueError):
    """Every stratum has a vanishing allocation factor."""


@dataclass
class StratumState:
    """Per-stratum inputs to allocation.

    fraction is the stratum's share of the corpus; posterior is the
    presample posterior whose mean drives the allocation.
    """

    label: str
    fraction: float
    posterior: GridDensity
    presample_n: int = 0
    presample_b: int = 0
    cost: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")
        if self.cost <= 0:
            raise ValueError(f"cost must be positive, got {self.cost}")
        if self.presample_n < 0 or not 0 <= self.presample_b <= max(self.presample_n, 0):
            raise ValueError(
                f"bad presample tally {self.presample_b}/{self.presample_n}"
            )

    @property
    def posterior_mean(self) -> float:
        return self.posterior.mean()


@dataclass(frozen=True)
class StratumAllocation:
    label: str
    q: float
    count: int


@dataclass(frozen=True)
class AllocationPlan:
    total_budget: int
    per_stratum: tuple[StratumAllocation, ...]
    residual_note: str = ""

    @property
    def counts(self) -> dict[str, int]:
        return {s.label: s.count for s in self.per_stratum}

    @property
    def fractions(self) -> dict[str, float]:
        return {s.label: s.q for s in self.per_stratum}

    def to_json_dict(self) -> dict:
        return {
            "total_budget": self.total_budget,
            "per_stratum": [
                {"label": s.label, "q": s.q, "count": s.count}
                for s in self.per_stratum
            ],
            "residual_note": self.residual_note,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "AllocationPlan":
        return cls(
            total_budget=data["total_budget"],
            per_stratum=tuple(
                StratumAllocation(s["label"], s["q"], s["count"])
                for s in data["per_stratum"]
            ),
            residual_note=data.get("residual_note", ""),
        )


def a_factor(stratum: StratumState) -> float:
    """Heterogeneity factor: fraction^2 * P * (1 - P) / (presample_n + 2).

    Zero exactly when the posterior mean sits at 0 or 1 or the stratum is
    an empty share of the population.
    """
    p = stratum.posterior_mean
    return stratum.fraction**2 * p * (1.0 - p) / (stratum.presample_n + 2)


def newbold_allocate(strata: list[StratumState], total_budget: int) -> AllocationPlan:
    """Split total_budget into integer per-stratum counts.

    Real-valued shares q_i are proportional to
    sqrt(cost_i) * sqrt(a_factor_i) * sqrt(presample_n_i + 1); integer
    counts come from largest-remainder rounding (ties broken by larger
    population fraction, then label order).  Strata with a zero factor
    get zero documents.
    """
    if total_budget < 0:
        raise ValueError(f"budget must be >= 0, got {total_budget}")
    if not strata:
        raise ValueError("need at least one stratum")
    factors = np.array([a_factor(s) for s in strata])
    weights = np.sqrt([s.cost for s in strata]) * np.sqrt(factors)
    weights *= np.sqrt([s.presample_n + 1 for s in strata])
    total_weight = weights.sum()
    if total_weight <= 0:
        raise DegenerateAllocationError(
            "allocation undefined: all strata degenerate "
            "(add presample data or widen priors)"
        )
    q = weights / total_weight
    counts, note = _largest_remainder(
        q * total_budget,
        total_budget,
        tiebreak=[(-s.fraction, s.label) for s in strata],
    )
    per = tuple(
        StratumAllocation(s.label, float(qi), int(ci))
        for s, qi, ci in zip(strata, q, counts)
    )
    return AllocationPlan(total_budget=total_budget, per_stratum=per, residual_note=note)


def _largest_remainder(targets: np.ndarray, total: int, tiebreak: list) -> tuple[np.ndarray, str]:
    """Round non-negative targets to integers summing exactly to total."""
    base = np.floor(targets).astype(np.int64)
    remainders = targets - base
    leftover = int(total - base.sum())
    order = sorted(
        range(len(targets)), key=lambda i: (-remainders[i],) + tuple(tiebreak[i])
    )
    for i in range(leftover):
        base[order[i]] += 1
    bumped = [str(order[i]) for i in range(leftover)]
    note = (
        f"largest-remainder rounding distributed {leftover} residual "
        f"document(s) to strata indices {', '.join(bumped)}"
        if leftover
        else "no rounding residual"
    )
    return base, note
