"""
The -1/+h bonus-malus Markov chain and its stationary behaviour.

Levels are 1-based in every public quantity (level 1 is the best level);
arrays are indexed from 0, so ``pi[0]`` is the occupancy of level 1.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, StationarySolveError
from .frequency import (CountPmf, Portfolio, QuadratureRule, build_gamma_quadrature,
                        poisson_pmf, truncated_pmf)

logger = logging.getLogger(__name__)

STATIONARY_RESIDUAL = 1e-10


@dataclass(frozen=True)
class TransitionRule:
    levels: int
    penalty: int

    def __post_init__(self):
        if not isinstance(self.levels, (int, np.integer)) or self.levels < 2:
            raise ConfigError(f"rule.levels must be an integer >= 2, got {self.levels}")
        if not isinstance(self.penalty, (int, np.integer)) or self.penalty < 1:
            raise ConfigError(f"rule.penalty must be an integer >= 1, got {self.penalty}")
        if self.penalty > self.levels - 1:
            warnings.warn(
                f"penalty {self.penalty} >= levels - 1: every claim sends the policyholder to level {self.levels}",
                stacklevel=3,
            )

    @property
    def middle_level(self) -> int:
        """The 1-based level floor(z/2) used to pin the scale of a shared table."""
        return self.levels // 2

    def step(self, level: int, claims: int) -> int:
        if claims == 0:
            return max(1, level - 1)
        return min(self.levels, level + claims * self.penalty)

    def to_dict(self) -> dict:
        return {"levels": int(self.levels), "penalty": int(self.penalty)}


def build_transition_matrix(mu: float, rule: TransitionRule,
                            pmf: CountPmf = poisson_pmf) -> np.ndarray:
    """
    Row-stochastic z-by-z matrix for one expected frequency ``mu``.

    A claim-free year moves down one level (floored at 1); ``n`` claims move
    up ``n * h`` levels, capped at ``z``.
    """
    if not mu > 0:
        raise ValueError(f"expected frequency must be > 0, got {mu}")
    z, h = rule.levels, rule.penalty
    probs = truncated_pmf(mu, pmf)
    tail = np.cumsum(probs[::-1])[::-1]  # tail[n] = P(N >= n)
    P = np.zeros((z, z))
    for row in range(z):
        P[row, max(0, row - 1)] += probs[0]
        # n claims land strictly below the cap while row + n*h < z - 1
        n_cap = (z - 1 - row + h - 1) // h
        n_cap = max(n_cap, 1)
        n_free = np.arange(1, min(n_cap, len(probs)))
        P[row, row + n_free * h] += probs[n_free]
        if n_cap < len(probs):
            P[row, z - 1] += tail[n_cap]
    return P


def stationary_distribution(P: np.ndarray, tol: float = 1e-12,
                            max_iter: int = 1_000_000) -> np.ndarray:
    """
    Stationary vector of a row-stochastic matrix.

    Solves ``(P^T - I) pi = 0`` with the last equation replaced by
    ``sum(pi) = 1``; falls back to power iteration when the direct solve is
    singular or inaccurate.

    Raises
    ------
    StationarySolveError
        If the fixed-point residual still exceeds 1e-10 after the fallback.
    """
    z = P.shape[0]
    A = P.T - np.eye(z)
    A[-1, :] = 1.0
    b = np.zeros(z)
    b[-1] = 1.0
    pi = None
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        logger.debug("direct stationary solve singular, using power iteration")
    if pi is not None:
        pi = np.clip(pi, 0.0, None)
        pi /= pi.sum()
        if _residual(pi, P) <= STATIONARY_RESIDUAL:
            return pi
    pi = np.full(z, 1.0 / z)
    for _ in range(max_iter):
        nxt = pi @ P
        if np.max(np.abs(nxt - pi)) < tol:
            pi = nxt
            break
        pi = nxt
    pi /= pi.sum()
    res = _residual(pi, P)
    if res > STATIONARY_RESIDUAL:
        raise StationarySolveError(f"stationary residual {res:.3e} after power iteration", residual=res)
    return pi


def _residual(pi: np.ndarray, P: np.ndarray) -> float:
    return float(np.max(np.abs(pi @ P - pi)))


@dataclass(frozen=True)
class MixedLevelMoments:
    """
    ``m[a][k, l] = E[Theta**a * pi_l(lambda_k Theta)]`` for a = 0, 1, 2.

    ``m0[k]`` is the conditional level law P(L = l | Lambda = lambda_k).
    """

    portfolio: Portfolio
    rule: TransitionRule
    m0: np.ndarray
    m1: np.ndarray
    m2: np.ndarray

    @property
    def rates(self) -> np.ndarray:
        return self.portfolio.rates

    @property
    def weights(self) -> np.ndarray:
        return self.portfolio.weights

    @property
    def shape(self) -> tuple[int, int]:
        return self.m0.shape


def mixed_level_moments(portfolio: Portfolio, rule: TransitionRule,
                        quadrature: QuadratureRule | None = None,
                        pmf: CountPmf = poisson_pmf) -> MixedLevelMoments:
    """
    Integrate stationary occupancies against the residual density.

    One stationary solve per (class, node) pair.
    """
    if quadrature is None:
        quadrature = build_gamma_quadrature(portfolio.residual)
    K, z = portfolio.size, rule.levels
    m = np.zeros((3, K, z))
    theta, u = quadrature.nodes, quadrature.weights
    for k, lam in enumerate(portfolio.rates):
        for j in range(quadrature.count):
            try:
                pi = stationary_distribution(build_transition_matrix(lam * theta[j], rule, pmf))
            except StationarySolveError as exc:
                raise StationarySolveError(
                    f"class {k + 1}, node {j}: {exc}", residual=exc.residual, location=(k + 1, j)
                ) from exc
            m[0, k] += u[j] * pi
            m[1, k] += u[j] * theta[j] * pi
            m[2, k] += u[j] * theta[j] ** 2 * pi
    return MixedLevelMoments(portfolio, rule, m[0], m[1], m[2])


@dataclass(frozen=True)
class LevelLaw:
    marginal: np.ndarray
    conditional: np.ndarray


def level_law(moments: MixedLevelMoments) -> LevelLaw:
    """Marginal P(L = l) and per-class P(L = l | Lambda = lambda_k)."""
    return LevelLaw(marginal=moments.weights @ moments.m0, conditional=moments.m0.copy())
