"""Random document draws and reviewer judgment tallies.

Draws are with replacement and uniform over a stratum, generated by a
named counter-based generator (Philox) so a stored seed replays the same
draws byte for byte on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VERDICTS = ("match", "no_match")

PRNG_ALGORITHMS = ("philox", "pcg64")


class PendingJudgmentsError(RuntimeError):
    """Raised when a tally is requested while draws are still unjudged."""

    def __init__(self, pending: list[int]):
        self.pending = list(pending)
        ids = ", ".join(str(i) for i in self.pending)
        super().__init__(f"pending judgments for draw_ids: {ids}")


@dataclass(frozen=True)
class SampleDraw:
    draw_id: int
    stratum: str
    doc_id: str
    phase: str  # "presample" | "full" | "extension"


@dataclass(frozen=True)
class Judgment:
    draw_id: int
    verdict: str
    reviewer: str
    timestamp: str = ""
    note: str | None = None
    auto: bool = False

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")


def make_rng(seed, algorithm: str = "philox") -> np.random.Generator:
    """Seedable generator; seed may be an int or a sequence of ints."""
    ss = np.random.SeedSequence(seed)
    if algorithm == "philox":
        return np.random.Generator(np.random.Philox(ss))
    if algorithm == "pcg64":
        return np.random.Generator(np.random.PCG64(ss))
    raise ValueError(f"unknown PRNG algorithm {algorithm!r}; use one of {PRNG_ALGORITHMS}")


def draw_with_replacement(
    stratum_docs: list[str],
    count: int,
    seed,
    stratum: str = "",
    phase: str = "full",
    start_draw_id: int = 0,
    algorithm: str = "philox",
) -> list[SampleDraw]:
    """Uniform independent draws from a stratum; duplicates permitted.

    Deterministic for a fixed (document order, count, seed).
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if count > 0 and not stratum_docs:
        raise ValueError(f"cannot draw {count} documents from empty stratum {stratum!r}")
    if count == 0:
        return []
    rng = make_rng(seed, algorithm)
    indices = rng.integers(0, len(stratum_docs), size=count)
    return [
        SampleDraw(
            draw_id=start_draw_id + i,
            stratum=stratum,
            doc_id=stratum_docs[int(j)],
            phase=phase,
        )
        for i, j in enumerate(indices)
    ]


def tally(
    judgments: list[Judgment],
    draws: list[SampleDraw],
    stratum: str,
    phases: set[str] | None = None,
) -> tuple[int, int]:
    """(matches, trials) over the judged draws of one stratum.

    Each draw is a separate trial even when the same document was drawn
    twice.  A draw judged more than once keeps its latest verdict
    (corrections supersede).  Unjudged draws in the requested phases are
    an error listing the pending draw ids.
    """
    latest: dict[int, Judgment] = {}
    for j in judgments:
        latest[j.draw_id] = j
    selected = [
        d for d in draws if d.stratum == stratum and (phases is None or d.phase in phases)
    ]
    pending = [d.draw_id for d in selected if d.draw_id not in latest]
    if pending:
        raise PendingJudgmentsError(pending)
    n = len(selected)
    b = sum(1 for d in selected if latest[d.draw_id].verdict == "match")
    return b, n
