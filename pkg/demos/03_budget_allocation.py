"""Split a reading budget across strata with Newbold allocation.

After a small presample of each stratum, the presample posteriors say how
heterogeneous each stratum still looks.  Newbold's rule concentrates the
remaining budget where it buys the most certainty: big strata and
uncertain strata get more reads.
"""

import stratabayes as sb

grid = sb.Grid(1e-5)
uniform = sb.uniform_prior(grid)


def stratum(label, fraction, presample_n, presample_b):
    if presample_n:
        post = sb.posterior(
            sb.binomial_likelihood(presample_n, presample_b, grid), uniform
        )
    else:
        post = uniform
    return sb.StratumState(
        label, fraction, post, presample_n=presample_n, presample_b=presample_b
    )


def show(title, strata, budget):
    plan = sb.newbold_allocate(strata, budget)
    print(title)
    for s in plan.per_stratum:
        print(f"  {s.label:<12} q = {s.q:.4f}  -> {s.count} documents")
    print()


# A 93%-vs-7% split with clean presamples (none of the minority stratum
# matched, all of the majority did): allocation lands close to the
# population fractions because both strata look equally settled.
show(
    "two strata, clean presamples (0/10 and 10/10), budget 200:",
    [stratum("minority", 0.07516, 10, 0), stratum("majority", 0.92484, 10, 10)],
    200,
)

# A messy presample (6/10) keeps a stratum heterogeneous, so it draws
# budget away from the settled one.
show(
    "same fractions, messy minority presample (6/10), budget 200:",
    [stratum("minority", 0.07516, 10, 6), stratum("majority", 0.92484, 10, 10)],
    200,
)

# With no presample at all and flat priors, everything cancels except
# the population fractions.
show(
    "three strata, no presample, budget 100:",
    [stratum("a", 0.2, 0, 0), stratum("b", 0.3, 0, 0), stratum("c", 0.5, 0, 0)],
    100,
)

# A stratum whose presample posterior has collapsed to certainty
# contributes nothing and is skipped entirely.
certain = sb.StratumState(
    "settled",
    0.5,
    sb.posterior(sb.binomial_likelihood(400, 400, grid), uniform),
    presample_n=400,
    presample_b=400,
)
# (with 400/400 the posterior mean is within 1/402 of 1, tiny but not 0;
# compare how few documents it receives)
show(
    "a nearly-certain stratum starves:",
    [certain, stratum("open", 0.5, 4, 2)],
    100,
)
