"""Grid-based probability numerics over the unit interval.

Likelihoods, priors, and posteriors are all represented the same way: a
probability *mass* per grid point x_k = k * step, summing to 1.  Working
with masses (rather than per-unit-x density values) keeps interval
summation and Monte Carlo sampling exact: the mass inside a cell range is
just the sum of the cells.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.stats import norm

DEFAULT_STEP = 1e-5

SCHEMA_VERSION = 1


class DegeneratePriorError(ValueError):
    """Elicited prior has no positive mass after clamping."""


class EmptyPosteriorError(ValueError):
    """Likelihood and prior have disjoint support."""


@dataclass(frozen=True)
class Grid:
    """Evaluation points x_k = k * step for k = 0..m, with m * step = 1.

    1/step must be an integer.  The default step of 1e-5 gives 100,001
    points (five significant digits); 1e-6 gives 1,000,001 points.
    """

    step: float = DEFAULT_STEP

    def __post_init__(self):
        if not (0.0 < self.step <= 1.0):
            raise ValueError(f"grid step must be in (0, 1], got {self.step}")
        inv = 1.0 / self.step
        if abs(inv - round(inv)) > 1e-6 * inv:
            raise ValueError(f"1/step must be an integer, got 1/{self.step}")
        object.__setattr__(self, "_points", None)

    @property
    def size(self) -> int:
        """Number of grid points l = 1/step + 1."""
        return round(1.0 / self.step) + 1

    @property
    def points(self) -> np.ndarray:
        if self._points is None:
            pts = np.arange(self.size, dtype=np.float64) * self.step
            object.__setattr__(self, "_points", pts)
        return self._points

    def nearest_index(self, x) -> np.ndarray | int:
        """Index of the grid cell nearest to x (ties round to even index)."""
        idx = np.rint(np.asarray(x) / self.step).astype(np.int64)
        idx = np.clip(idx, 0, self.size - 1)
        return idx if idx.ndim else int(idx)


@dataclass(eq=False)
class GridDensity:
    """Probability mass function on a Grid: mass[k] = P(x = x_k) >= 0."""

    grid: Grid
    mass: np.ndarray

    def __post_init__(self):
        self.mass = np.asarray(self.mass, dtype=np.float64)
        if self.mass.shape != (self.grid.size,):
            raise ValueError(
                f"mass has shape {self.mass.shape}, grid needs ({self.grid.size},)"
            )
        if not np.all(np.isfinite(self.mass)):
            raise ValueError("mass values must be finite")
        if np.any(self.mass < 0):
            raise ValueError("mass values must be non-negative")

    def normalized(self) -> "GridDensity":
        total = self.mass.sum()
        if total <= 0:
            raise ValueError("cannot normalize a density with zero total mass")
        return GridDensity(self.grid, self.mass / total)

    def total(self) -> float:
        return float(self.mass.sum())

    def mean(self) -> float:
        return float(np.sum(self.grid.points * self.mass))

    def variance(self) -> float:
        mu = self.mean()
        return float(np.sum(self.mass * (self.grid.points - mu) ** 2))

    def argmax_x(self) -> float:
        """x of the highest-mass cell (lowest x wins ties)."""
        return float(self.grid.points[int(np.argmax(self.mass))])

    # -- serialization -------------------------------------------------

    def to_json_dict(self, rle: bool = False) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "step": self.grid.step}
        if rle:
            out["encoding"] = "rle"
            out["segments"] = _rle_segments(self.mass)
        else:
            out["encoding"] = "dense"
            out["masses"] = self.mass.tolist()
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "GridDensity":
        grid = Grid(data["step"])
        if data.get("encoding", "dense") == "rle":
            mass = np.zeros(grid.size)
            pos = 0
            for seg in data["segments"]:
                if isinstance(seg, list) and seg and seg[0] == "z":
                    pos += seg[1]
                else:
                    vals = seg[1]
                    mass[pos : pos + len(vals)] = vals
                    pos += len(vals)
            if pos != grid.size:
                raise ValueError(f"rle segments cover {pos} cells, grid has {grid.size}")
        else:
            mass = np.asarray(data["masses"], dtype=np.float64)
        return cls(grid, mass)

    def to_json(self, rle: bool = False) -> str:
        return json.dumps(self.to_json_dict(rle=rle))

    @classmethod
    def from_json(cls, text: str) -> "GridDensity":
        return cls.from_json_dict(json.loads(text))

    def to_xy_text(self) -> str:
        """Two-column plain text (x, mass) for external plotting."""
        lines = [
            f"{x:.10g}\t{m:.17g}" for x, m in zip(self.grid.points, self.mass)
        ]
        return "\n".join(lines) + "\n"


def _rle_segments(mass: np.ndarray) -> list:
    """Alternating ["z", run_length] / ["v", [values...]] segments.

    Only zero runs are compressed; everything else is stored verbatim.
    """
    iszero = mass == 0.0
    if mass.size == 0:
        return []
    boundaries = np.flatnonzero(np.diff(iszero)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [mass.size]))
    segments = []
    for s, e in zip(starts, ends):
        if iszero[s]:
            segments.append(["z", int(e - s)])
        else:
            segments.append(["v", mass[s:e].tolist()])
    return segments


def downsample_mass(density: GridDensity, max_points: int = 2000):
    """Bucket-sum a density into at most max_points (x_center, mass) pairs.

    Buckets partition the grid, so total mass is preserved.
    """
    if max_points < 1:
        raise ValueError("max_points must be >= 1")
    n = density.grid.size
    k = min(max_points, n)
    edges = np.linspace(0, n, k + 1).astype(np.int64)
    edges = np.unique(edges)
    masses = np.add.reduceat(density.mass, edges[:-1])
    lo = density.grid.points[edges[:-1]]
    hi = density.grid.points[np.minimum(edges[1:], n - 1)]
    centers = (lo + hi) / 2.0
    return centers, masses


@dataclass(frozen=True)
class ElicitedPrior:
    """Reviewer-supplied likelihood points (x, value), to be splined.

    x values must be strictly increasing from 0 to 1 with at least four
    points; values are non-negative and not all zero.
    """

    points: tuple
    reviewer: str = ""
    timestamp: str = ""

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 4:
            raise ValueError(f"need at least 4 points, got {len(pts)}")
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise ValueError("x values must start at 0 and end at 1")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("x values must be strictly increasing")
        if any(not np.isfinite(y) or y < 0 for y in ys):
            raise ValueError("likelihood values must be finite and >= 0")
        if all(y == 0 for y in ys):
            raise ValueError("likelihood values must not all be zero")

    @classmethod
    def evenly_spaced(cls, values, reviewer: str = "", timestamp: str = ""):
        """Points at x = 0, 1/(n-1), ..., 1 for the given values."""
        n = len(values)
        xs = [i / (n - 1) for i in range(n)]
        return cls(tuple(zip(xs, values)), reviewer=reviewer, timestamp=timestamp)


@dataclass(frozen=True)
class CredibleInterval:
    lo: float
    hi: float
    mass_captured: float
    method: str  # "exact" | "normal"

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_doc_counts(self, corpus_size: int) -> tuple[int, int]:
        """Map fraction endpoints to document counts (nearest integer)."""
        return (
            int(np.rint(self.lo * corpus_size)),
            int(np.rint(self.hi * corpus_size)),
        )


# ---------------------------------------------------------------------
# Density constructors
# ---------------------------------------------------------------------


def binomial_likelihood(n: int, b: int, grid: Grid | None = None) -> GridDensity:
    """Normalized binomial likelihood of b successes in n trials.

    f(x_k) is proportional to x_k^b (1-x_k)^(n-b), computed in log space
    and exponentiated after subtracting the maximum, so large n cannot
    overflow.  The constant binomial coefficient cancels under
    normalization.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 trials, got {n}")
    if not 0 <= b <= n:
        raise ValueError(f"successes must satisfy 0 <= b <= n, got b={b}, n={n}")
    grid = grid or Grid()
    x = grid.points
    logf = np.zeros(grid.size)
    with np.errstate(divide="ignore"):
        if b > 0:
            logf += b * np.log(x)
        if b < n:
            logf += (n - b) * np.log1p(-x)
    logf -= logf.max()
    f = np.exp(logf)
    return GridDensity(grid, f / f.sum())


def uniform_prior(grid: Grid | None = None) -> GridDensity:
    """Flat prior: equal mass at every grid point."""
    grid = grid or Grid()
    return GridDensity(grid, np.full(grid.size, 1.0 / grid.size))


def spline_prior(elicited: ElicitedPrior, grid: Grid | None = None) -> GridDensity:
    """Natural cubic spline through the elicited points, as a density.

    The spline (zero second derivative at the endpoints) is evaluated at
    every grid point; negative excursions are clamped to zero, then the
    result is normalized to unit mass.
    """
    grid = grid or Grid()
    xs = np.array([x for x, _ in elicited.points])
    ys = np.array([y for _, y in elicited.points])
    spline = CubicSpline(xs, ys, bc_type="natural")
    values = spline(grid.points)
    values = np.clip(values, 0.0, None)
    total = values.sum()
    if total <= 0:
        raise DegeneratePriorError("prior is zero everywhere after clamping")
    return GridDensity(grid, values / total)


def posterior(likelihood: GridDensity, prior: GridDensity) -> GridDensity:
    """Bayes' theorem on the grid: pointwise product, renormalized."""
    if likelihood.grid != prior.grid:
        raise ValueError("likelihood and prior must share a grid")
    product = likelihood.mass * prior.mass
    total = product.sum()
    if total <= 0:
        raise EmptyPosteriorError("prior excludes all data-supported values")
    return GridDensity(likelihood.grid, product / total)


# ---------------------------------------------------------------------
# Credibility intervals
# ---------------------------------------------------------------------


def credible_interval_exact(density: GridDensity, mass: float = 0.95) -> CredibleInterval:
    """Tightest contiguous interval by greedy expansion from the peak.

    Starting at the global argmax cell (lowest x on ties), repeatedly add
    whichever neighboring cell -- just left of the current interval or
    just right of it -- carries more mass, until the captured mass
    reaches the target.  When both neighbors tie exactly, the right cell
    is taken first and the left one on the following step.
    """
    if not 0.0 < mass < 1.0:
        raise ValueError(f"mass must be in (0, 1), got {mass}")
    f = density.mass
    n = f.size
    lo = hi = int(np.argmax(f))
    captured = float(f[lo])
    take_right_on_tie = True
    while captured < mass and (lo > 0 or hi < n - 1):
        left = f[lo - 1] if lo > 0 else -np.inf
        right = f[hi + 1] if hi < n - 1 else -np.inf
        if right > left:
            hi += 1
            captured += float(f[hi])
        elif left > right:
            lo -= 1
            captured += float(f[lo])
        elif take_right_on_tie:
            hi += 1
            captured += float(f[hi])
            take_right_on_tie = False
        else:
            lo -= 1
            captured += float(f[lo])
            take_right_on_tie = True
    x = density.grid.points
    return CredibleInterval(float(x[lo]), float(x[hi]), captured, "exact")


def credible_interval_normal(density: GridDensity, mass: float = 0.95) -> CredibleInterval:
    """Normal-approximation interval mu +/- z*sigma, clipped to [0, 1].

    z is the standard normal quantile for the requested mass (1.96 at
    0.95).  mass_captured reports the density mass actually inside the
    interval, which for non-normal shapes can differ from the request.
    """
    if not 0.0 < mass < 1.0:
        raise ValueError(f"mass must be in (0, 1), got {mass}")
    mu = density.mean()
    sigma = np.sqrt(density.variance())
    z = float(norm.ppf(0.5 + mass / 2.0))
    lo = max(0.0, mu - z * sigma)
    hi = min(1.0, mu + z * sigma)
    x = density.grid.points
    inside = (x >= lo - 1e-15) & (x <= hi + 1e-15)
    captured = float(density.mass[inside].sum())
    return CredibleInterval(lo, hi, captured, "normal")
