"""
Monte-Carlo portfolio simulator, used as an independent check of the analytic path.

Policyholders are simulated in fixed-size blocks.  Each block draws from its
own PCG64 stream spawned from the root seed, so the result depends only on
the seed and the block size, never on how blocks are scheduled.

Standard errors treat policyholders as the independent unit: the years
recorded for one policyholder are serially correlated, so each statistic is
first averaged per policyholder (or per block, for the variance ratios).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .chain import TransitionRule
from .errors import ConfigError
from .frequency import Portfolio

BLOCK_SIZE = 4096
JACKKNIFE_GROUPS = 50


@dataclass(frozen=True)
class SimConfig:
    policyholders: int = 100_000
    burn_in_years: int = 200
    sample_years: int = 10
    seed: int = 0
    start: str | int = "best"

    def __post_init__(self):
        if self.policyholders < 1:
            raise ConfigError("simulation.policyholders must be >= 1")
        if self.burn_in_years < 1:
            raise ConfigError("simulation.burn_in_years must be >= 1")
        if self.sample_years < 1:
            raise ConfigError("simulation.sample_years must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError("simulation.seed must be an unsigned 64-bit integer")
        if isinstance(self.start, str) and self.start not in ("best", "worst", "random"):
            raise ConfigError("simulation.start must be 'best', 'worst', 'random' or a level")

    @classmethod
    def from_dict(cls, spec: Mapping[str, Any]) -> "SimConfig":
        if not isinstance(spec, Mapping):
            raise ConfigError("simulation must be an object")
        known = {"policyholders", "burn_in_years", "sample_years", "seed", "start"}
        unknown = set(spec) - known
        if unknown:
            raise ConfigError(f"simulation has unknown field(s): {', '.join(sorted(unknown))}")
        kwargs = dict(spec)
        for key in ("policyholders", "burn_in_years", "sample_years", "seed"):
            if key in kwargs and (not isinstance(kwargs[key], int) or isinstance(kwargs[key], bool)):
                raise ConfigError(f"simulation.{key} must be an integer")
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {"policyholders": self.policyholders, "burn_in_years": self.burn_in_years,
                "sample_years": self.sample_years, "seed": self.seed, "start": self.start}


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float

    def z_score(self, reference: float) -> float:
        if self.se == 0:
            return 0.0 if self.value == reference else float("inf")
        return (self.value - reference) / self.se

    def to_dict(self) -> dict:
        return {"value": self.value, "se": self.se}


@dataclass(frozen=True)
class SchemeEstimates:
    relativity_means: list[Estimate]
    fix: Estimate
    hmse: Estimate


@dataclass
class SimResult:
    config: SimConfig
    class_counts: np.ndarray
    level_law: np.ndarray           # (K, z) empirical P(L = l | k)
    level_law_se: np.ndarray
    marginal_law: np.ndarray
    marginal_law_se: np.ndarray
    alt_fairness: Estimate
    schemes: dict[str, SchemeEstimates] = field(default_factory=dict)


@dataclass
class _Sample:
    klass: np.ndarray    # (n,)
    theta: np.ndarray    # (n,)
    levels: np.ndarray   # (n, years), 1-based


def _start_levels(config: SimConfig, z: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if config.start == "best":
        return np.ones(n, dtype=np.int64)
    if config.start == "worst":
        return np.full(n, z, dtype=np.int64)
    if config.start == "random":
        return rng.integers(1, z + 1, size=n)
    level = int(config.start)
    if not 1 <= level <= z:
        raise ConfigError(f"simulation.start level {level} outside 1..{z}")
    return np.full(n, level, dtype=np.int64)


def _simulate_block(portfolio: Portfolio, rule: TransitionRule, config: SimConfig,
                    n: int, rng: np.random.Generator) -> _Sample:
    z, h = rule.levels, rule.penalty
    psi = portfolio.residual.psi
    klass = rng.choice(portfolio.size, size=n, p=portfolio.weights)
    theta = rng.gamma(shape=1.0 / psi, scale=psi, size=n)
    mean = portfolio.rates[klass] * theta
    level = _start_levels(config, z, n, rng)
    record = np.empty((n, config.sample_years), dtype=np.int64)
    for year in range(config.burn_in_years + config.sample_years):
        claims = rng.poisson(mean)
        level = np.where(claims == 0, np.maximum(level - 1, 1), np.minimum(level + claims * h, z))
        if year >= config.burn_in_years:
            record[:, year - config.burn_in_years] = level
    return _Sample(klass, theta, record)


def simulate_levels(portfolio: Portfolio, rule: TransitionRule, config: SimConfig) -> _Sample:
    """Draw classes, residual effects and recorded BM levels for every policyholder."""
    root = np.random.SeedSequence(int(config.seed))
    n_blocks = -(-config.policyholders // BLOCK_SIZE)
    streams = root.spawn(n_blocks)
    parts = []
    for b, seq in enumerate(streams):
        n = min(BLOCK_SIZE, config.policyholders - b * BLOCK_SIZE)
        parts.append(_simulate_block(portfolio, rule, config, n, np.random.Generator(np.random.PCG64(seq))))
    return _Sample(
        np.concatenate([p.klass for p in parts]),
        np.concatenate([p.theta for p in parts]),
        np.concatenate([p.levels for p in parts]),
    )


def _mean_se(per_unit: np.ndarray) -> Estimate:
    n = len(per_unit)
    if n == 0:
        return Estimate(float("nan"), float("nan"))
    se = float(per_unit.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan")
    return Estimate(float(per_unit.mean()), se)


def _groups(n: int) -> np.ndarray:
    g = min(JACKKNIFE_GROUPS, n)
    return np.arange(n) * g // n


def _jackknife(stat, groups: np.ndarray) -> Estimate:
    """Delete-one-group jackknife over contiguous policyholder groups."""
    full = stat(np.ones_like(groups, dtype=bool))
    g = groups.max() + 1
    if g < 2:
        return Estimate(full, float("nan"))
    leave = np.array([stat(groups != i) for i in range(g)])
    se = float(np.sqrt((g - 1) / g * np.sum((leave - leave.mean()) ** 2)))
    return Estimate(full, se)


def _fix_stat(ratio: np.ndarray, klass: np.ndarray, K: int):
    # ratio: (n, years) pure relativity per record
    def stat(mask):
        r = ratio[mask]
        k = klass[mask]
        counts = np.bincount(k, minlength=K).astype(float)
        sums = np.bincount(k, weights=r.sum(axis=1), minlength=K)
        present = counts > 0
        cond = np.zeros(K)
        cond[present] = sums[present] / (counts[present] * r.shape[1])
        overall = r.mean()
        weights = counts / counts.sum()
        between = float(weights @ (cond - overall) ** 2)
        total = float(r.var())
        return between / total if total > 0 else 0.0
    return stat


def _alt_stat(rates_per_holder: np.ndarray, levels: np.ndarray, z: int):
    def stat(mask):
        lam = np.repeat(rates_per_holder[mask], levels.shape[1])
        lev = levels[mask].ravel() - 1
        count = np.bincount(lev, minlength=z).astype(float)
        sums = np.bincount(lev, weights=lam, minlength=z)
        mean = lam.mean()
        seen = count > 0
        cond = sums[seen] / count[seen]
        between = float((count[seen] / count.sum()) @ (cond - mean) ** 2)
        return between / float(lam.var())
    return stat


def simulate(portfolio: Portfolio, rule: TransitionRule, schemes: Mapping[str, Any] | None = None,
             config: SimConfig | None = None) -> SimResult:
    """
    Simulate the portfolio under the -1/+h rule and estimate level laws and scheme metrics.

    Parameters
    ----------
    portfolio, rule
        Model being checked.
    schemes : mapping of name to scheme, optional
        Anything with a ``(K, z)`` ``premium`` attribute and a ``gamma``
        table, shared ``(z,)`` or individualized ``(K, z)``.
    config : SimConfig, optional

    Returns
    -------
    SimResult
    """
    config = config or SimConfig()
    z, K = rule.levels, portfolio.size
    sample = simulate_levels(portfolio, rule, config)
    n, years = sample.levels.shape

    counts = np.bincount(sample.klass, minlength=K)
    law = np.zeros((K, z))
    law_se = np.zeros((K, z))
    # per-policyholder occupancy fractions: iid units for the standard errors
    occupancy = np.zeros((n, z))
    for level in range(1, z + 1):
        occupancy[:, level - 1] = (sample.levels == level).mean(axis=1)
    for k in range(K):
        rows = occupancy[sample.klass == k]
        if len(rows) == 0:
            continue
        law[k] = rows.mean(axis=0)
        law_se[k] = rows.std(axis=0, ddof=1) / np.sqrt(len(rows)) if len(rows) > 1 else np.nan
    marginal = occupancy.mean(axis=0)
    marginal_se = occupancy.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.full(z, np.nan)

    groups = _groups(n)
    rates = portfolio.rates[sample.klass]
    if K >= 2 and np.ptp(rates) > 0:
        alt = _jackknife(_alt_stat(rates, sample.levels, z), groups)
    else:
        alt = Estimate(float("nan"), float("nan"))

    result = SimResult(config, counts, law, law_se, marginal, marginal_se, alt)
    for name, scheme in (schemes or {}).items():
        premium = np.asarray(scheme.premium)
        charged = premium[sample.klass[:, None], sample.levels - 1]
        ratio = charged / rates[:, None]
        table = np.broadcast_to(np.asarray(scheme.gamma, dtype=float), (K, z))
        relativity = table[sample.klass[:, None], sample.levels - 1]
        rel_means = []
        for k in range(K):
            rel_means.append(_mean_se(relativity[sample.klass == k].mean(axis=1)))
        err = ((rates * sample.theta)[:, None] - charged) ** 2
        result.schemes[name] = SchemeEstimates(
            relativity_means=rel_means,
            fix=_jackknife(_fix_stat(ratio, sample.klass, K), groups),
            hmse=_mean_se(err.mean(axis=1)),
        )
    return result


def simulate_bayes_fix(portfolio: Portfolio, years: int, policyholders: int = 100_000,
                       seed: int = 0) -> Estimate:
    """
    Monte-Carlo FIX of the Poisson-gamma posterior mean premium after ``years`` years.

    The premium is unbiased within each class, so the estimate should be
    zero up to sampling noise.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
    psi = portfolio.residual.psi
    klass = rng.choice(portfolio.size, size=policyholders, p=portfolio.weights)
    lam = portfolio.rates[klass]
    theta = rng.gamma(1.0 / psi, psi, size=policyholders)
    total = rng.poisson(lam * theta * years) if years > 0 else np.zeros(policyholders)
    a = 1.0 / psi
    ratio = ((a + total) / (a + years * lam))[:, None]
    return _jackknife(_fix_stat(ratio, klass, portfolio.size), _groups(policyholders))
