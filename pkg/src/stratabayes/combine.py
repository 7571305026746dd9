"""Combine per-stratum posteriors into one corpus-wide density.

The combined quantity is the population-weighted sum of stratum
proportions.  Its density is built by simulation: jointly sample every
stratum posterior, form the weighted average, and drop each draw into the
nearest grid cell.  A closed-form weighted mean of raw tallies serves as a
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import CredibleInterval, GridDensity, credible_interval_exact

DEFAULT_MC_DRAWS = 1_000_000

WEIGHT_TOLERANCE = 1e-12


def make_rng(seed) -> np.random.Generator:
    """Philox generator: counter-based, seedable, identical on every platform."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def sample_density(density: GridDensity, rng: np.random.Generator, size=None):
    """Inverse-CDF draw(s): grid point x_k with probability mass[k]."""
    cdf = np.cumsum(density.mass)
    u = rng.random(size)
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, density.grid.size - 1)
    out = density.grid.points[idx]
    return float(out) if size is None else out


def monte_carlo_combine(
    posteriors: list[GridDensity],
    weights: list[float],
    draws: int = DEFAULT_MC_DRAWS,
    seed=0,
) -> GridDensity:
    """Density of the weighted sum of stratum proportions.

    Each iteration samples one point from every posterior, forms the
    weighted average, snaps it to the nearest grid cell (half-step ties
    round to the even cell index), and adds 1/draws of mass there.  All
    iterations are vectorized; the per-stratum sampling order is fixed, so
    a given seed always reproduces the same density bit for bit.
    """
    if len(posteriors) != len(weights) or not posteriors:
        raise ValueError("need one weight per posterior")
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    if abs(w.sum() - 1.0) > WEIGHT_TOLERANCE:
        raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
    grid = posteriors[0].grid
    for d in posteriors[1:]:
        if d.grid != grid:
            raise ValueError("all posteriors must share a grid")
    rng = make_rng(seed)
    acc = np.zeros(draws)
    for density, weight in zip(posteriors, w):
        if weight == 0.0:
            continue
        acc += weight * sample_density(density, rng, draws)
    idx = grid.nearest_index(acc)
    counts = np.bincount(idx, minlength=grid.size)
    return GridDensity(grid, counts / float(draws))


def weighted_mean(tallies: list[tuple[int, int]], weights: list[float]) -> float:
    """Closed-form cross-check: sum of weight_i * matches_i / trials_i."""
    if len(tallies) != len(weights):
        raise ValueError("need one weight per tally")
    total = 0.0
    for (b, n), w in zip(tallies, weights):
        if n < 1:
            raise ValueError(f"tally {b}/{n}: need at least one trial per stratum")
        total += w * (b / n)
    return total


@dataclass(frozen=True)
class CombinedEstimate:
    """Final product of a study: combined density plus derived readouts."""

    density: GridDensity
    interval: CredibleInterval
    corpus_size: int
    doc_interval: tuple[int, int]
    mc_draws: int
    seed: object = None
    weighted_mean_check: float | None = None

    @property
    def mean(self) -> float:
        return self.density.mean()

    @property
    def doc_width(self) -> int:
        return self.doc_interval[1] - self.doc_interval[0]


def finalize(
    combined: GridDensity,
    corpus_size: int,
    mass: float = 0.95,
    mc_draws: int = DEFAULT_MC_DRAWS,
    seed=None,
    weighted_mean_check: float | None = None,
) -> CombinedEstimate:
    """Wrap a combined density with its interval and document-count range.

    Document counts are the fraction endpoints times corpus size, each
    rounded to the nearest integer.
    """
    interval = credible_interval_exact(combined, mass)
    return CombinedEstimate(
        density=combined,
        interval=interval,
        corpus_size=corpus_size,
        doc_interval=interval.to_doc_counts(corpus_size),
        mc_draws=mc_draws,
        seed=seed,
        weighted_mean_check=weighted_mean_check,
    )
