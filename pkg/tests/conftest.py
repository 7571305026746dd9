"""Shared fixtures: synthetic corpora with known composition.

The fixture generator is the oracle for ingestion and stratification
tests: it writes a corpus with an exact, known number of documents per
file and plants marker phrases / short documents deliberately, so the
splitter and stratifier must recover those counts.
"""

from __future__ import annotations

import numpy as np
import pytest

from stratabayes.corpus import ingest_corpus
from stratabayes.stratify import RuleSet, StratificationRule


def write_corpus_file(path, bodies):
    """One tagged document per body string; returns the file path."""
    parts = []
    for body in bodies:
        parts.append(f"<DOC>{body}</DOC>\n")
    path.write_text("".join(parts), encoding="latin-1")
    return path


def pseudo_body(i: int) -> str:
    """Short document carrying the planted pseudo-document marker."""
    return f"\n>Part IV\nFiller notice {i}\n"


def real_body(i: int, lines: int = 12) -> str:
    rng = np.random.default_rng(i)
    words = [f"regulation agency notice {rng.integers(0, 10 ** 6)}" for _ in range(lines)]
    return "\n" + "\n".join(words) + "\n"


@pytest.fixture
def fixture_corpus(tmp_path):
    """20 files x 5 documents: 30 planted pseudo, 70 real (100 total)."""
    files = []
    pseudo_left = 30
    counter = 0
    for f in range(20):
        bodies = []
        for d in range(5):
            if pseudo_left > 0 and (counter % 10) < 3:
                bodies.append(pseudo_body(counter))
                pseudo_left -= 1
            else:
                bodies.append(real_body(counter))
            counter += 1
        files.append(write_corpus_file(tmp_path / f"file_{f:02d}.sgm", bodies))
    return ingest_corpus(files, corpus_id="fixture-100")


@pytest.fixture
def fixture_rules():
    return RuleSet(
        rules=[
            StratificationRule(
                rule_id="part-divider",
                pattern=r">Part [IVXM]",
                target_stratum="apparent_pseudo",
                priority=1,
            ),
            StratificationRule(
                rule_id="very-short",
                max_lines=3,
                target_stratum="apparent_pseudo",
                priority=2,
            ),
        ],
        default_stratum="apparent_real",
    )


def beta_mean(a: float, b: float) -> float:
    """Closed-form Beta moments; independent oracle for grid posteriors."""
    return a / (a + b)


def beta_variance(a: float, b: float) -> float:
    return a * b / ((a + b) ** 2 * (a + b + 1))


def minimal_contiguous_interval(mass: np.ndarray, target: float):
    """Brute-force shortest window containing the peak with >= target mass.

    Two-pointer sweep over the cumulative sum; independent of the greedy
    peak-outward path it is used to check.  Returns (lo_idx, hi_idx).
    Minimal windows need not be unique, so compare widths, not endpoints.
    """
    csum = np.concatenate([[0.0], np.cumsum(mass)])
    n = mass.size
    peak = int(np.argmax(mass))
    best = None
    j = peak
    for i in range(peak + 1):
        while j < n and csum[j + 1] - csum[i] < target:
            j += 1
        if j == n:
            break
        if best is None or (j - i) < (best[1] - best[0]):
            best = (i, j)
    assert best is not None, "target mass exceeds total"
    return best
