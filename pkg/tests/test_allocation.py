"""Budget allocation against hand-evaluated formulas."""

from __future__ import annotations

import numpy as np
import pytest

from stratabayes.allocation import (
    DegenerateAllocationError,
    StratumState,
    a_factor,
    newbold_allocate,
)
from stratabayes.density import (
    Grid,
    GridDensity,
    binomial_likelihood,
    posterior,
    uniform_prior,
)

GRID = Grid(1e-5)
UNIFORM = uniform_prior(GRID)


def spike(at: float) -> GridDensity:
    mass = np.zeros(GRID.size)
    mass[GRID.nearest_index(at)] = 1.0
    return GridDensity(GRID, mass)


def make_state(label, fraction, n, b, cost=1.0):
    if n >= 1:
        post = posterior(binomial_likelihood(n, b, GRID), UNIFORM)
    else:
        post = UNIFORM
    return StratumState(
        label=label, fraction=fraction, posterior=post,
        presample_n=n, presample_b=b, cost=cost,
    )


class TestAFactor:
    def test_direct_substitution(self):
        s = StratumState("s", fraction=0.5, posterior=spike(0.5), presample_n=0)
        assert a_factor(s) == pytest.approx(0.25 * 0.25 / 2, abs=1e-12)

    def test_real_stratum_presample(self):
        # fraction 0.92484, uniform prior with 10/10: grid mean ~ 11/12.
        # Direct substitution oracle: 0.92484^2 * (11/12)(1/12) / 12.
        s = make_state("real", 0.92484, 10, 10)
        expected = 0.92484**2 * (11 / 12) * (1 / 12) / 12
        assert expected == pytest.approx(5.4448e-3, abs=1e-7)
        assert a_factor(s) == pytest.approx(expected, rel=1e-3)

    def test_vanishes_at_certainty(self):
        s = StratumState("s", fraction=0.4, posterior=spike(1.0), presample_n=3, presample_b=3)
        assert a_factor(s) == 0.0

    def test_vanishes_for_empty_stratum(self):
        s = StratumState("s", fraction=0.0, posterior=UNIFORM)
        assert a_factor(s) == 0.0


class TestNewboldAllocate:
    def test_study_replica(self):
        # fractions 3444/45820 and 42376/45820, presamples 0/10 and 10/10,
        # equal unit costs, budget 200
        pseudo = make_state("apparent_pseudo", 3444 / 45820, 10, 0)
        real = make_state("apparent_real", 42376 / 45820, 10, 10)
        plan = newbold_allocate([pseudo, real], 200)
        assert plan.counts == {"apparent_pseudo": 15, "apparent_real": 185}
        assert sum(s.count for s in plan.per_stratum) == 200
        assert sum(s.q for s in plan.per_stratum) == pytest.approx(1.0, abs=1e-12)

    def test_identical_strata_split_evenly(self):
        a = make_state("a", 0.5, 5, 2)
        b = make_state("b", 0.5, 5, 2)
        plan = newbold_allocate([a, b], 100)
        assert plan.counts == {"a": 50, "b": 50}

    def test_reduces_to_fraction_proportional(self):
        # equal posteriors, costs, and presample sizes cancel, leaving
        # q_i proportional to the population fraction
        states = [make_state(lbl, f, 0, 0) for lbl, f in [("a", 0.2), ("b", 0.3), ("c", 0.5)]]
        plan = newbold_allocate(states, 100)
        assert plan.counts == {"a": 20, "b": 30, "c": 50}

    def test_cost_scale_invariance(self):
        states_1 = [make_state("a", 0.3, 4, 1), make_state("b", 0.7, 6, 5)]
        states_9 = [make_state("a", 0.3, 4, 1, cost=9.0), make_state("b", 0.7, 6, 5, cost=9.0)]
        q1 = [s.q for s in newbold_allocate(states_1, 50).per_stratum]
        q9 = [s.q for s in newbold_allocate(states_9, 50).per_stratum]
        np.testing.assert_allclose(q1, q9, atol=1e-12)

    def test_budget_additivity(self):
        states = [make_state("a", 0.25, 3, 1), make_state("b", 0.75, 3, 2)]
        for budget in [0, 1, 7, 200, 9999]:
            plan = newbold_allocate(states, budget)
            assert sum(s.count for s in plan.per_stratum) == budget

    def test_monotone_in_fraction(self):
        def q_of_first(f):
            states = [make_state("a", f, 5, 2), make_state("b", 1 - f, 5, 2)]
            return newbold_allocate(states, 100).per_stratum[0].q

        qs = [q_of_first(f) for f in (0.1, 0.2, 0.4, 0.6, 0.8)]
        assert all(x < y for x, y in zip(qs, qs[1:]))

    def test_rounding_within_one_of_target(self):
        states = [make_state("a", 0.11, 2, 1), make_state("b", 0.53, 2, 1), make_state("c", 0.36, 2, 1)]
        plan = newbold_allocate(states, 97)
        for s in plan.per_stratum:
            assert abs(s.count - s.q * 97) < 1.0

    def test_degenerate_stratum_gets_zero(self):
        live = make_state("live", 0.6, 5, 2)
        dead = StratumState("dead", 0.4, spike(1.0), presample_n=5, presample_b=5)
        plan = newbold_allocate([live, dead], 40)
        assert plan.counts["dead"] == 0
        assert plan.counts["live"] == 40

    def test_all_degenerate_is_an_error(self):
        dead = StratumState("dead", 1.0, spike(0.0), presample_n=5, presample_b=0)
        with pytest.raises(DegenerateAllocationError):
            newbold_allocate([dead], 40)

    def test_rejects_negative_budget(self):
        with pytest.raises(ValueError):
            newbold_allocate([make_state("a", 1.0, 2, 1)], -1)


class TestStratumState:
    def test_posterior_mean_consistency(self):
        s = make_state("s", 0.5, 10, 4)
        assert s.posterior_mean == pytest.approx(s.posterior.mean(), abs=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            StratumState("s", fraction=1.5, posterior=UNIFORM)
        with pytest.raises(ValueError):
            StratumState("s", fraction=0.5, posterior=UNIFORM, cost=0.0)
        with pytest.raises(ValueError):
            StratumState("s", fraction=0.5, posterior=UNIFORM, presample_n=2, presample_b=3)
