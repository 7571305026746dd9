"""Combine stratum posteriors into one corpus-wide estimate.

The corpus-wide fraction is the population-weighted sum of the stratum
fractions.  Its density comes from simulation: jointly sample each
stratum's posterior a million times, form the weighted average of every
joint draw, and bin the results on the grid.
"""

import stratabayes as sb

CORPUS_SIZE = 45_820
WEIGHTS = [3_444 / CORPUS_SIZE, 42_376 / CORPUS_SIZE]  # stratum shares

grid = sb.Grid(1e-5)
uniform = sb.uniform_prior(grid)

# Stratum tallies after the full sample: the minority stratum matched
# 0 of 15 reads, the majority matched all 185.
pseudo = sb.posterior(sb.binomial_likelihood(15, 0, grid), uniform)
real = sb.posterior(sb.binomial_likelihood(185, 185, grid), uniform)
print(f"minority stratum mean: {pseudo.mean():.5f}")
print(f"majority stratum mean: {real.mean():.5f}")

combined = sb.monte_carlo_combine(
    [pseudo, real], WEIGHTS, draws=1_000_000, seed=2024
)
estimate = sb.finalize(combined, CORPUS_SIZE, mass=0.95)
print(f"combined mean: {estimate.mean:.5f}")

# Cross-check against the closed-form weighted mean of the raw tallies.
check = sb.weighted_mean([(0, 15), (185, 185)], WEIGHTS)
print(f"weighted-mean check: {check:.5f}  (gap {abs(check - estimate.mean):.2e})")

iv = estimate.interval
print(f"95% interval: [{iv.lo:.5f}, {iv.hi:.5f}]")
print(
    f"documents: {estimate.doc_interval[0]:,} .. {estimate.doc_interval[1]:,}"
    f"  (width {estimate.doc_width:,})"
)

# The same tally read as one big unstratified sample is far less sharp.
overall = sb.posterior(sb.binomial_likelihood(200, 187, grid), uniform)
flat_estimate = sb.finalize(overall, CORPUS_SIZE, mass=0.95)
print()
print(f"unstratified width: {flat_estimate.doc_width:,} documents")
print(f"stratified width:   {estimate.doc_width:,} documents")
print(f"ratio: {estimate.doc_width / flat_estimate.doc_width:.2f}")
