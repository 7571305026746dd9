"""Turn a reviewer's hunch into a prior density.

A reviewer supplies likelihood values at eleven evenly spaced points (how
plausible each candidate fraction feels after a first skim of the
corpus).  A natural cubic spline through those points, clamped at zero
and normalized, becomes the prior.
"""

import stratabayes as sb

grid = sb.Grid(1e-5)

# Eleven values at x = 0.0, 0.1, ..., 1.0: this reviewer thinks the
# match fraction is high, most plausibly around 0.9.
hunch = [0.0, 0.1, 0.2, 0.3, 0.5, 0.8, 1.5, 3.0, 6.0, 9.0, 4.0]
elicited = sb.ElicitedPrior.evenly_spaced(hunch, reviewer="demo")
prior = sb.spline_prior(elicited, grid)
print(f"prior mean {prior.mean():.4f}, peak at x = {prior.argmax_x():.4f}")

# Equal values at every point are the degenerate case: a flat prior.
flat = sb.spline_prior(sb.ElicitedPrior.evenly_spaced([1.0] * 11), grid)
print(f"flat elicitation mean {flat.mean():.4f} (uniform, as expected)")

# The prior tilts a posterior: compare against the non-informative one.
likelihood = sb.binomial_likelihood(200, 187, grid)
with_prior = sb.posterior(likelihood, prior)
without = sb.posterior(likelihood, sb.uniform_prior(grid))
print(f"posterior mean, informative prior:    {with_prior.mean():.5f}")
print(f"posterior mean, non-informative:      {without.mean():.5f}")

iv_with = sb.credible_interval_exact(with_prior, 0.95)
iv_without = sb.credible_interval_exact(without, 0.95)
print(f"interval, informative prior:    [{iv_with.lo:.5f}, {iv_with.hi:.5f}]")
print(f"interval, non-informative:      [{iv_without.lo:.5f}, {iv_without.hi:.5f}]")

# Densities export as plain (x, mass) columns for any plotting tool.
rows = prior.to_xy_text().splitlines()
print(f"plot export: {len(rows):,} rows, e.g. {rows[90000]!r}")
