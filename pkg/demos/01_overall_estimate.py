"""Estimate a corpus-wide fraction from one overall sample.

Story: a reviewer read 200 randomly drawn documents from a 45,820-document
corpus and judged 187 of them substantive.  What fraction of the whole
corpus is substantive, and how sure are we?
"""

import stratabayes as sb

CORPUS_SIZE = 45_820
SAMPLED, MATCHED = 200, 187

grid = sb.Grid(1e-5)

# The likelihood of each possible true fraction given the tally,
# evaluated at five significant digits so fractions map onto exact
# document counts.
likelihood = sb.binomial_likelihood(SAMPLED, MATCHED, grid)
print(f"sample proportion: {MATCHED / SAMPLED:.4f}")
print(f"likelihood peaks at x = {likelihood.argmax_x():.5f}")

# With no prior opinion, the posterior is the normalized likelihood.
post = sb.posterior(likelihood, sb.uniform_prior(grid))
print(f"posterior mean: {post.mean():.5f}")
print(f"posterior sd:   {post.variance() ** 0.5:.5f}")

# Two ways to quantify the uncertainty.  The normal approximation is the
# textbook mu +/- 1.96 sigma; the exact interval walks outward from the
# density's peak, always absorbing the larger neighboring cell, and stops
# at 95% captured mass.  The exact interval is never wider.
normal = sb.credible_interval_normal(post, 0.95)
exact = sb.credible_interval_exact(post, 0.95)
print(f"normal 95% interval: [{normal.lo:.5f}, {normal.hi:.5f}]  width {normal.width:.5f}")
print(f"exact  95% interval: [{exact.lo:.5f}, {exact.hi:.5f}]  width {exact.width:.5f}")

# Fractions become document counts by scaling to the corpus.
lo_docs, hi_docs = exact.to_doc_counts(CORPUS_SIZE)
print(f"documents: {lo_docs:,} .. {hi_docs:,}  (width {hi_docs - lo_docs:,})")
print()
print("That spread of ~3,100 documents is what stratified sampling")
print("attacks: see 04_monte_carlo_combination.py.")
