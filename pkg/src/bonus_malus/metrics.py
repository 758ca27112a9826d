"""
Fairness and prediction metrics of a premium table.

All expectations are exact sums over (class, level) using the
quadrature-resolved moments; nothing here samples.  Schemes are used
through their ``premium`` matrix, shape ``(K, z)``, and, for relativity
means, their ``gamma`` table.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import MixedLevelMoments
from .errors import ConfigError

# total pure-relativity variance below this leaves FIX undefined
FIX_DEGENERATE = 1e-14


@dataclass(frozen=True)
class SchemeMetrics:
    fix: float | None
    hmse: float
    relativity_means: np.ndarray
    pure_relativity_means: np.ndarray
    premium_means: np.ndarray
    overall_relativity_mean: float
    between_variance: float
    within_variance: float

    @property
    def fix_defined(self) -> bool:
        return self.fix is not None

    @property
    def fix_or_zero(self) -> float:
        """FIX with the zero-variance case reported as 0, the usual convention in summary tables."""
        return 0.0 if self.fix is None else self.fix

    def to_dict(self) -> dict:
        return {
            "fix": self.fix,
            "fix_defined": self.fix_defined,
            "hmse": self.hmse,
            "relativity_means": self.relativity_means.tolist(),
            "pure_relativity_means": self.pure_relativity_means.tolist(),
            "premium_means": self.premium_means.tolist(),
            "overall_relativity_mean": self.overall_relativity_mean,
            "between_variance": self.between_variance,
            "within_variance": self.within_variance,
        }


def _premium(scheme) -> np.ndarray:
    return scheme.premium if hasattr(scheme, "premium") else np.asarray(scheme, dtype=float)


def hmse_of_premium(premium: np.ndarray, moments: MixedLevelMoments) -> float:
    lam, w = moments.rates, moments.weights
    per_class = (
        lam ** 2 * moments.m2.sum(axis=1)
        - 2.0 * lam * (premium * moments.m1).sum(axis=1)
        + (premium ** 2 * moments.m0).sum(axis=1)
    )
    return float(max(w @ per_class, 0.0))


def hmse(scheme, moments: MixedLevelMoments) -> float:
    """E[(Lambda Theta - M(Lambda, L))^2], expanded over (class, level)."""
    return hmse_of_premium(_premium(scheme), moments)


def _variance_parts(premium: np.ndarray, moments: MixedLevelMoments):
    ratio = premium / moments.rates[:, None]
    cond = (ratio * moments.m0).sum(axis=1)
    overall = float(moments.weights @ cond)
    between = float(moments.weights @ (cond - overall) ** 2)
    within = float(moments.weights @ ((ratio - cond[:, None]) ** 2 * moments.m0).sum(axis=1))
    return cond, overall, between, within


def fix_of_premium(premium: np.ndarray, moments: MixedLevelMoments) -> float | None:
    _, _, between, within = _variance_parts(premium, moments)
    total = between + within
    if total < FIX_DEGENERATE:
        return None
    return between / total


def fix(scheme, moments: MixedLevelMoments) -> float | None:
    """
    Fairness index Var(E[M/Lambda | Lambda]) / Var(M/Lambda).

    Returns ``None`` when the pure relativity has (numerically) zero variance,
    in which case the index is undefined.
    """
    return fix_of_premium(_premium(scheme), moments)


def relativity_table(scheme, moments: MixedLevelMoments) -> np.ndarray:
    """The scheme's own relativities as a ``(K, z)`` array; a bare premium is read as ``M / lambda``."""
    K, z = moments.shape
    if hasattr(scheme, "gamma"):
        return np.broadcast_to(np.asarray(scheme.gamma, dtype=float), (K, z))
    return _premium(scheme) / moments.rates[:, None]


def conditional_relativity_means(scheme, moments: MixedLevelMoments) -> np.ndarray:
    """
    E[gamma(L) | Lambda = lambda_k] of the scheme's relativity table.

    Coincides with E[M / Lambda | Lambda = lambda_k] whenever the a-priori
    rates are the lambdas themselves; for a fully optimized shared table the
    two differ, see :func:`conditional_pure_relativity_means`.
    """
    return (relativity_table(scheme, moments) * moments.m0).sum(axis=1)


def conditional_pure_relativity_means(scheme, moments: MixedLevelMoments) -> np.ndarray:
    """E[M / Lambda | Lambda = lambda_k] for each class."""
    return _variance_parts(_premium(scheme), moments)[0]


def conditional_premium_means(scheme, moments: MixedLevelMoments) -> np.ndarray:
    """E[M | Lambda = lambda_k] for each class."""
    return (_premium(scheme) * moments.m0).sum(axis=1)


def scheme_metrics(scheme, moments: MixedLevelMoments) -> SchemeMetrics:
    premium = _premium(scheme)
    cond, overall, between, within = _variance_parts(premium, moments)
    total = between + within
    return SchemeMetrics(
        fix=None if total < FIX_DEGENERATE else between / total,
        hmse=hmse_of_premium(premium, moments),
        relativity_means=conditional_relativity_means(scheme, moments),
        pure_relativity_means=cond,
        premium_means=(premium * moments.m0).sum(axis=1),
        overall_relativity_mean=overall,
        between_variance=between,
        within_variance=within,
    )


def alt_fairness_measure(moments: MixedLevelMoments) -> float:
    """
    Var(E[Lambda | L]) / Var(Lambda).

    Depends only on the chain and the portfolio, not on any relativity table.
    """
    lam, w = moments.rates, moments.weights
    if len(lam) < 2:
        raise ConfigError("alternative fairness measure needs at least two rate classes")
    mean = float(w @ lam)
    var = float(w @ (lam - mean) ** 2)
    if var <= 0:
        raise ConfigError("alternative fairness measure needs distinct a-priori rates")
    joint = w[:, None] * moments.m0
    level_mass = joint.sum(axis=0)
    cond = (lam @ joint) / level_mass
    return float(level_mass @ (cond - mean) ** 2) / var
