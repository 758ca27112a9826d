"""
Premium schemes built on a :class:`~bonus_malus.chain.MixedLevelMoments` kernel.

Every scheme is an a-priori rate per class ``xi`` and a relativity table
``gamma``; the premium is ``M(k, l) = xi[k] * gamma(k, l)``.

============  =========================================================
``pno``       no a-posteriori rating, ``xi = lambda``, ``gamma = 1``
``ppos``      shared table optimized for fixed ``xi = lambda``
``poi``       one optimal table per class, ``gamma = E[Theta | k, l]``
``pfos``      shared table and ``xi`` optimized jointly (coordinate descent)
``debias``    given shared table, ``xi`` chosen so each class is unbiased
============  =========================================================
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .chain import MixedLevelMoments
from .errors import ConfigError, ConvergenceError, UnreachableLevelError
from .frequency import Portfolio
from .metrics import fix_of_premium, hmse_of_premium

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SharedScheme:
    xi: np.ndarray
    gamma: np.ndarray
    name: str = "shared"

    def __post_init__(self):
        if np.any(~(np.asarray(self.xi) > 0)) or np.any(~(np.asarray(self.gamma) > 0)):
            raise ValueError(f"{self.name}: a-priori rates and relativities must be strictly positive")

    @property
    def premium(self) -> np.ndarray:
        return np.outer(self.xi, self.gamma)

    def rescaled(self, c: float) -> "SharedScheme":
        """The equivalent scheme ``(xi / c, c * gamma)``."""
        return SharedScheme(self.xi / c, self.gamma * c, self.name)


@dataclass(frozen=True)
class IndividualizedScheme:
    xi: np.ndarray
    gamma: np.ndarray  # (K, z)
    name: str = "individualized"

    def __post_init__(self):
        if np.any(~(np.asarray(self.xi) > 0)) or np.any(~(np.asarray(self.gamma) > 0)):
            raise ValueError(f"{self.name}: a-priori rates and relativities must be strictly positive")

    @property
    def premium(self) -> np.ndarray:
        return self.xi[:, None] * self.gamma


Scheme = SharedScheme | IndividualizedScheme


@dataclass(frozen=True)
class TraceStep:
    label: str
    xi: np.ndarray
    gamma: np.ndarray
    hmse: float
    fix: float | None


@dataclass
class DescentTrace:
    steps: list[TraceStep] = field(default_factory=list)
    converged: bool = False
    cycles: int = 0

    def append(self, step: TraceStep):
        self.steps.append(step)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def hmse(self) -> np.ndarray:
        return np.array([s.hmse for s in self.steps])

    @property
    def fix(self) -> list[float | None]:
        return [s.fix for s in self.steps]


def pno(portfolio: Portfolio, levels: int) -> SharedScheme:
    return SharedScheme(portfolio.rates.copy(), np.ones(levels), "pno")


def _shared_relativities(moments: MixedLevelMoments, xi: np.ndarray) -> np.ndarray:
    # argmin_gamma E[(Lambda Theta - xi(Lambda) gamma(L))^2]
    w, lam = moments.weights, moments.rates
    num = (w * lam * xi) @ moments.m1
    den = (w * xi ** 2) @ moments.m0
    dead = np.flatnonzero(~(den > 0))
    if dead.size:
        raise UnreachableLevelError(
            f"level {dead[0] + 1} has zero stationary mass; check the transition rule",
            level=int(dead[0] + 1),
        )
    return num / den


def _priori_rates(moments: MixedLevelMoments, gamma: np.ndarray) -> np.ndarray:
    # argmin_xi E[(Lambda Theta - xi(Lambda) gamma(L))^2], class by class
    num = moments.m1 @ gamma
    den = moments.m0 @ gamma ** 2
    dead = np.flatnonzero(~(den > 0))
    if dead.size:
        raise UnreachableLevelError(
            f"class {dead[0] + 1} has no stationary mass on the relativity table",
            risk_class=int(dead[0] + 1),
        )
    return moments.rates * num / den


def ppos(moments: MixedLevelMoments) -> SharedScheme:
    """Shared table optimized with ``xi = lambda``: E[L^2 Theta | l] / E[L^2 | l]."""
    lam = moments.rates
    return SharedScheme(lam.copy(), _shared_relativities(moments, lam), "ppos")


def poi(moments: MixedLevelMoments) -> IndividualizedScheme:
    """Individualized tables ``gamma(k, l) = E[Theta | Lambda = lambda_k, L = l]``."""
    m0, m1 = moments.m0, moments.m1
    dead = np.argwhere(~(m0 > 0))
    if dead.size:
        k, level = dead[0]
        raise UnreachableLevelError(
            f"class {k + 1}, level {level + 1} has zero stationary mass",
            level=int(level + 1), risk_class=int(k + 1),
        )
    return IndividualizedScheme(moments.rates.copy(), m1 / m0, "poi")


def debias_priori(gamma, moments: MixedLevelMoments) -> SharedScheme:
    """
    Rescale a-priori rates so every class is unbiased under a given shared table.

    ``xi(k) = lambda_k / E[gamma(L) | Lambda = lambda_k]``, which makes
    ``E[M | Lambda = lambda_k] = lambda_k`` and therefore FIX = 0.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (moments.rule.levels,):
        raise ValueError(f"gamma must have length {moments.rule.levels}")
    if np.any(~(gamma > 0)):
        raise ValueError("relativities must be strictly positive")
    return SharedScheme(moments.rates / (moments.m0 @ gamma), gamma.copy(), "debias")


def pure_relativity_view(scheme: SharedScheme, portfolio: Portfolio) -> IndividualizedScheme:
    """Rewrite a shared scheme as ``xi* = lambda``, ``gamma*(k, l) = xi(k) gamma(l) / lambda_k``."""
    rates = portfolio.rates
    gamma = (scheme.xi / rates)[:, None] * scheme.gamma[None, :]
    return IndividualizedScheme(rates.copy(), gamma, scheme.name + "*")


def pfos(moments: MixedLevelMoments, q: float | None = None, *, init: str = "pno",
         tolerance: float = 1e-10, max_cycles: int = 500) -> tuple[SharedScheme, DescentTrace]:
    """
    Jointly optimize a-priori rates and a shared relativity table.

    Alternates the exact least-squares updates for ``gamma`` (given ``xi``)
    and ``xi`` (given ``gamma``) until the objective's relative decrease over
    a full cycle drops below ``tolerance``, then rescales so that
    ``gamma(floor(z/2)) = q``.

    Parameters
    ----------
    moments : MixedLevelMoments
    q : float, optional
        Value pinned at level ``floor(z/2)``; defaults to the PPOS relativity
        at that level.
    init : {"pno", "ppos"}
        Starting table: all ones, or the PPOS table.  ``xi`` starts at
        ``lambda`` in both cases.
    tolerance : float
        Relative-decrease stopping threshold per (gamma, xi) cycle.
    max_cycles : int
        Cycle cap; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    scheme : SharedScheme
    trace : DescentTrace
        Unscaled iterates ``(gamma^m, xi^m)`` in update order, each with HMSE
        and FIX.
    """
    z = moments.rule.levels
    pin = moments.rule.middle_level - 1
    if q is None:
        q = float(ppos(moments).gamma[pin])
    if not q > 0:
        raise ConfigError(f"pfos.q must be > 0, got {q}")
    if init not in ("pno", "ppos"):
        raise ConfigError(f"pfos.init must be 'pno' or 'ppos', got {init!r}")

    xi = moments.rates.copy()
    gamma = np.ones(z) if init == "pno" else _shared_relativities(moments, xi)
    trace = DescentTrace()

    def record(m_gamma, m_xi):
        premium = np.outer(xi, gamma)
        value = hmse_of_premium(premium, moments)
        trace.append(TraceStep(f"(gamma{m_gamma}, xi{m_xi})", xi.copy(), gamma.copy(),
                               value, fix_of_premium(premium, moments)))
        return value

    previous = record(0, 0)
    for cycle in range(1, max_cycles + 1):
        gamma = _shared_relativities(moments, xi)
        record(cycle, cycle - 1)
        xi = _priori_rates(moments, gamma)
        current = record(cycle, cycle)
        trace.cycles = cycle
        scale = max(previous, np.finfo(float).tiny)
        if (previous - current) / scale < tolerance:
            trace.converged = True
            break
        previous = current
    if not trace.converged:
        raise ConvergenceError(f"coordinate descent did not converge in {max_cycles} cycles", trace=trace)
    logger.debug("pfos converged after %d cycles, hmse=%.10g", trace.cycles, current)

    c = q / gamma[pin]
    return SharedScheme(xi / c, gamma * c, "pfos"), trace


def bayesian_posterior_mean(rate: float, years: int, total_claims: int, psi: float) -> float:
    """Poisson-gamma posterior mean premium ``lambda (1/psi + n) / (1/psi + t lambda)``."""
    if years < 0 or total_claims < 0:
        raise ValueError("years and total_claims must be non-negative")
    a = 1.0 / psi
    return rate * (a + total_claims) / (a + years * rate)
