"""Bayesian stratified sampling for statistical questions about corpora.

Workflow: ingest a tagged corpus, partition it with cheap objective rules,
elicit (or default) a prior per stratum, presample, allocate a reading
budget across strata, judge the drawn documents, and combine per-stratum
posteriors into one credibility interval for the whole corpus.
"""

from .allocation import (
    AllocationPlan,
    DegenerateAllocationError,
    StratumState,
    a_factor,
    newbold_allocate,
)
from .campaign import Campaign, CampaignStateError
from .combine import (
    CombinedEstimate,
    finalize,
    make_rng,
    monte_carlo_combine,
    sample_density,
    weighted_mean,
)
from .corpus import Corpus, Document, ingest_corpus, split_documents
from .density import (
    CredibleInterval,
    DegeneratePriorError,
    ElicitedPrior,
    EmptyPosteriorError,
    Grid,
    GridDensity,
    binomial_likelihood,
    credible_interval_exact,
    credible_interval_normal,
    downsample_mass,
    posterior,
    spline_prior,
    uniform_prior,
)
from .sampling import (
    Judgment,
    PendingJudgmentsError,
    SampleDraw,
    draw_with_replacement,
    tally,
)
from .stratify import (
    RuleSet,
    StratificationRule,
    StratumPartition,
    classify,
    stratify_corpus,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationPlan",
    "Campaign",
    "CampaignStateError",
    "CombinedEstimate",
    "Corpus",
    "CredibleInterval",
    "DegenerateAllocationError",
    "DegeneratePriorError",
    "Document",
    "ElicitedPrior",
    "EmptyPosteriorError",
    "Grid",
    "GridDensity",
    "Judgment",
    "PendingJudgmentsError",
    "RuleSet",
    "SampleDraw",
    "StratificationRule",
    "StratumPartition",
    "StratumState",
    "a_factor",
    "binomial_likelihood",
    "classify",
    "credible_interval_exact",
    "credible_interval_normal",
    "downsample_mass",
    "draw_with_replacement",
    "finalize",
    "ingest_corpus",
    "make_rng",
    "monte_carlo_combine",
    "newbold_allocate",
    "posterior",
    "sample_density",
    "spline_prior",
    "split_documents",
    "stratify_corpus",
    "tally",
    "uniform_prior",
    "weighted_mean",
]
