import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from bonus_malus import ConfigError, Portfolio, ResidualLaw, build_gamma_quadrature, poisson_pmf
from bonus_malus.frequency import truncated_pmf


def test_quadrature_weights_are_probabilities():
    rule = build_gamma_quadrature(ResidualLaw(0.8), 64)
    assert rule.count == 64
    assert np.all(rule.weights >= 0)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert rule.expect(rule.nodes) == pytest.approx(1.0, abs=1e-12)


def test_second_moment_against_trapezoid():
    # E[Theta^2] = 1 + psi; independent check on (0, 60] with a fine grid
    law = ResidualLaw(0.8)
    grid = np.linspace(1e-12, 60.0, 1_000_001)
    density = stats.gamma(a=law.shape, scale=1.0 / law.rate).pdf(grid)
    trapezoid = integrate.trapezoid(grid ** 2 * density, grid)
    rule = build_gamma_quadrature(law, 64)
    assert rule.expect(rule.nodes ** 2) == pytest.approx(1.8, abs=1e-10)
    assert trapezoid == pytest.approx(1.8, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(psi=st.floats(0.1, 2.0), order=st.integers(0, 4))
def test_moments_exact_to_order_four(psi, order):
    law = ResidualLaw(psi)
    rule = build_gamma_quadrature(law, 64)
    exact = stats.gamma(a=1.0 / psi, scale=psi).moment(order)
    assert rule.expect(rule.nodes ** order) == pytest.approx(exact, rel=1e-8)
    assert law.moment(order) == pytest.approx(exact, rel=1e-12)


def test_tiny_dispersion_does_not_overflow():
    # shape 1e4: Gamma(shape) itself overflows, the normalized rule does not
    rule = build_gamma_quadrature(ResidualLaw(1e-4), 32)
    assert np.all(np.isfinite(rule.nodes))
    assert rule.expect(rule.nodes) == pytest.approx(1.0, abs=1e-10)
    assert rule.expect((rule.nodes - 1.0) ** 2) == pytest.approx(1e-4, rel=1e-6)


def test_smooth_expectation_matches_adaptive_quad():
    psi = 0.5
    rule = build_gamma_quadrature(ResidualLaw(psi), 64)
    f = lambda t: np.exp(-0.3 * t)
    dist = stats.gamma(a=1 / psi, scale=psi)
    oracle, _ = integrate.quad(lambda t: f(t) * dist.pdf(t), 0, np.inf, epsabs=1e-13)
    # closed form: Laplace transform of the gamma law
    assert oracle == pytest.approx((1 + 0.3 * psi) ** (-1 / psi), rel=1e-10)
    assert rule.expect(f(rule.nodes)) == pytest.approx(oracle, rel=1e-10)


@pytest.mark.parametrize("nodes", [1, 0, 2.5])
def test_bad_node_count(nodes):
    with pytest.raises(ConfigError, match="quadrature_nodes"):
        build_gamma_quadrature(ResidualLaw(0.8), nodes)


def test_poisson_values():
    assert poisson_pmf(0.5, 0) == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert poisson_pmf(0.5, 1) == pytest.approx(0.5 * math.exp(-0.5), rel=1e-14)
    np.testing.assert_allclose(poisson_pmf(3.7, np.arange(30)), stats.poisson(3.7).pmf(np.arange(30)),
                               rtol=1e-12)


@pytest.mark.parametrize("mean", [0.0, -1.0, float("nan")])
def test_poisson_rejects_nonpositive_mean(mean):
    with pytest.raises(ValueError):
        poisson_pmf(mean, 0)


@pytest.mark.parametrize("mean", [1e-6, 0.1, 1.0, 25.0, 4493.0])
def test_truncated_pmf_normalized(mean):
    probs = truncated_pmf(mean)
    assert probs.sum() == pytest.approx(1.0, abs=1e-14)
    assert stats.poisson(mean).sf(len(probs) - 1) <= 1e-11


def test_portfolio_from_dict_roundtrip():
    spec = {"classes": [{"lambda": 0.1, "weight": 0.25, "label": "a"},
                        {"lambda": 0.9, "weight": 0.75}], "psi": 0.8}
    portfolio = Portfolio.from_dict(json.loads(json.dumps(spec)))
    assert portfolio.size == 2
    assert portfolio.labels == ["a", "2"]
    np.testing.assert_array_equal(portfolio.rates, [0.1, 0.9])
    assert Portfolio.from_dict(portfolio.to_dict()) == portfolio


@pytest.mark.parametrize("spec, field", [
    ({"classes": [{"lambda": 0.1, "weight": 0.5}, {"lambda": 0.2, "weight": 0.4}], "psi": 0.8}, "weight"),
    ({"classes": [{"lambda": -0.1, "weight": 1.0}], "psi": 0.8}, "lambda"),
    ({"classes": [{"lambda": 0.1, "weight": 1.0}], "psi": 0.0}, "psi"),
    ({"classes": [{"lambda": 0.1}], "psi": 0.8}, "weight"),
    ({"classes": [], "psi": 0.8}, "classes"),
    ({"psi": 0.8}, "classes"),
    ({"classes": [{"lambda": "x", "weight": 1.0}], "psi": 0.8}, "lambda"),
])
def test_portfolio_validation_names_field(spec, field):
    with pytest.raises(ConfigError, match=field):
        Portfolio.from_dict(spec)


def test_weights_within_tolerance_accepted():
    Portfolio.from_rates([0.1, 0.2, 0.3], [1 / 3, 1 / 3, 1 / 3 + 5e-13])
    with pytest.raises(ConfigError):
        Portfolio.from_rates([0.1, 0.2, 0.3], [1 / 3, 1 / 3, 1 / 3 + 1e-9])
