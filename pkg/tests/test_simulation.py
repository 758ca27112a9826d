import numpy as np
import pytest

from bonus_malus import (ConfigError, Portfolio, TransitionRule, build_transition_matrix, fix, hmse, level_law,
                         mixed_level_moments, pno, ppos, stationary_distribution)
from bonus_malus.simulation import SimConfig, simulate, simulate_bayes_fix, simulate_levels

import reference_values as ref

RULE = TransitionRule(10, 2)
SCENARIO_ONE = Portfolio.from_rates(ref.SCENARIO_RATES[1], psi=0.8)


def small(seed=3, **kw):
    return SimConfig(**{"policyholders": 20_000, "burn_in_years": 60, "sample_years": 10, "seed": seed, **kw})


def test_same_seed_bit_identical():
    a = simulate_levels(SCENARIO_ONE, RULE, small())
    b = simulate_levels(SCENARIO_ONE, RULE, small())
    np.testing.assert_array_equal(a.levels, b.levels)
    np.testing.assert_array_equal(a.theta, b.theta)
    c = simulate_levels(SCENARIO_ONE, RULE, small(seed=4))
    assert not np.array_equal(a.theta, c.theta)


def test_blocks_are_independent_of_portfolio_size():
    # block streams are spawned from the seed, so a smaller run is a prefix of a larger one
    a = simulate_levels(SCENARIO_ONE, RULE, small(policyholders=5000))
    b = simulate_levels(SCENARIO_ONE, RULE, small(policyholders=9000))
    np.testing.assert_array_equal(a.levels[:4096], b.levels[:4096])


def test_empirical_laws_normalized():
    sim = simulate(SCENARIO_ONE, RULE, config=small())
    assert sim.marginal_law.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(sim.level_law.sum(axis=1), 1.0, atol=1e-12)
    assert sim.class_counts.sum() == 20_000


def test_best_level_occupancy():
    sim = simulate(SCENARIO_ONE, RULE, config=small(policyholders=40_000))
    assert abs(sim.marginal_law[0] - 0.414) < 3 * sim.marginal_law_se[0] + 5e-4


def test_degenerate_mixture_matches_single_chain():
    portfolio = Portfolio.from_rates([0.5], psi=1e-4)
    sim = simulate(portfolio, RULE, config=small())
    pi = stationary_distribution(build_transition_matrix(0.5, RULE))
    z = (sim.marginal_law - pi) / sim.marginal_law_se
    assert np.all(np.abs(z) < 4)


def test_standard_errors_shrink_with_size():
    m = simulate(SCENARIO_ONE, RULE, config=small(policyholders=20_000)).marginal_law_se
    n = simulate(SCENARIO_ONE, RULE, config=small(policyholders=40_000)).marginal_law_se
    ratio = n / m
    assert np.all(np.abs(ratio / (1 / np.sqrt(2)) - 1) < 0.2)


def test_starting_level_forgotten():
    best = simulate(SCENARIO_ONE, RULE, config=small(seed=11, start="best", burn_in_years=200))
    worst = simulate(SCENARIO_ONE, RULE, config=small(seed=12, start="worst", burn_in_years=200))
    diff = best.marginal_law - worst.marginal_law
    se = np.hypot(best.marginal_law_se, worst.marginal_law_se)
    # ten simultaneous comparisons: 3.5 SE keeps the family-wise false alarm rate near 0.5%
    assert np.all(np.abs(diff) < 3.5 * se)


def test_scheme_estimates_near_analytic():
    m = mixed_level_moments(SCENARIO_ONE, RULE)
    schemes = {"pno": pno(SCENARIO_ONE, 10), "ppos": ppos(m)}
    sim = simulate(SCENARIO_ONE, RULE, schemes, small(policyholders=30_000))
    est = sim.schemes["ppos"]
    assert abs(est.fix.z_score(fix(schemes["ppos"], m))) < 4
    assert abs(est.hmse.z_score(hmse(schemes["ppos"], m))) < 4
    # flat table: relativity exactly one, zero standard error
    assert all(e.value == 1.0 and e.se == 0.0 for e in sim.schemes["pno"].relativity_means)
    law = level_law(m)
    z = (sim.level_law - law.conditional) / sim.level_law_se
    assert np.nanmax(np.abs(z)) < 4.5


def test_bayes_premium_has_no_double_counting():
    est = simulate_bayes_fix(SCENARIO_ONE, years=5, policyholders=50_000, seed=1)
    assert abs(est.value) < 3 * est.se + 1e-4


@pytest.mark.parametrize("kwargs, field", [
    ({"policyholders": 0}, "policyholders"),
    ({"burn_in_years": 0}, "burn_in_years"),
    ({"seed": -1}, "seed"),
    ({"start": "middle"}, "start"),
])
def test_config_validation(kwargs, field):
    with pytest.raises(ConfigError, match=field):
        SimConfig(**kwargs)


def test_config_from_dict():
    cfg = SimConfig.from_dict({"policyholders": 10, "seed": 42})
    assert cfg.to_dict()["seed"] == 42
    with pytest.raises(ConfigError, match="unknown"):
        SimConfig.from_dict({"polcyholders": 10})
    with pytest.raises(ConfigError, match="integer"):
        SimConfig.from_dict({"seed": 1.5})
