"""
Portfolio specification for the Poisson-gamma frequency random effects model.

A portfolio is a finite set of a-priori rate classes ``(lambda_k, w_k)`` and a
gamma residual effect ``Theta`` with mean one and dispersion ``psi``.  Every
integral against the residual density is discretized by a
:class:`QuadratureRule` built with :func:`build_gamma_quadrature`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import ConfigError

WEIGHT_TOLERANCE = 1e-12

# (mean, counts) -> probabilities; the per-year claim-count law of the kernel
CountPmf = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RateClass:
    index: int
    rate: float
    weight: float
    label: str = ""

    def __post_init__(self):
        if not np.isfinite(self.rate) or self.rate <= 0:
            raise ConfigError(f"classes[{self.index - 1}].lambda must be > 0, got {self.rate}")
        if not (0 < self.weight <= 1):
            raise ConfigError(f"classes[{self.index - 1}].weight must lie in (0, 1], got {self.weight}")


@dataclass(frozen=True)
class ResidualLaw:
    """Gamma residual effect with E[Theta] = 1 and Var[Theta] = psi."""

    psi: float

    def __post_init__(self):
        if not np.isfinite(self.psi) or self.psi <= 0:
            raise ConfigError(f"psi must be > 0, got {self.psi}")

    @property
    def shape(self) -> float:
        return 1.0 / self.psi

    @property
    def rate(self) -> float:
        return 1.0 / self.psi

    def moment(self, order: int) -> float:
        """Closed-form raw moment E[Theta**order]."""
        a = self.shape
        return float(np.prod([(a + i) / a for i in range(order)]))


@dataclass(frozen=True)
class Portfolio:
    classes: tuple[RateClass, ...]
    residual: ResidualLaw

    def __post_init__(self):
        if len(self.classes) == 0:
            raise ConfigError("classes must contain at least one rate class")
        indices = [c.index for c in self.classes]
        if indices != list(range(1, len(indices) + 1)):
            raise ConfigError("classes indices must be unique and contiguous from 1")
        total = sum(c.weight for c in self.classes)
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise ConfigError(f"classes weight values must sum to 1, got {total:.15g}")

    @classmethod
    def from_rates(cls, rates: Sequence[float], weights: Sequence[float] | None = None,
                   psi: float = 0.8, labels: Sequence[str] | None = None) -> "Portfolio":
        """Build a portfolio from parallel sequences; equal weights by default."""
        rates = list(rates)
        if weights is None:
            weights = [1.0 / len(rates)] * len(rates)
        if len(weights) != len(rates):
            raise ConfigError("classes: rates and weights differ in length")
        labels = list(labels) if labels is not None else [""] * len(rates)
        classes = tuple(
            RateClass(i + 1, float(r), float(w), labels[i])
            for i, (r, w) in enumerate(zip(rates, weights))
        )
        return cls(classes, ResidualLaw(float(psi)))

    @classmethod
    def from_dict(cls, spec: Mapping[str, Any]) -> "Portfolio":
        """Parse ``{"classes": [{"lambda": r, "weight": r}], "psi": r}``."""
        if not isinstance(spec, Mapping):
            raise ConfigError("portfolio must be a JSON object")
        if "classes" not in spec:
            raise ConfigError("missing field 'classes'")
        if "psi" not in spec:
            raise ConfigError("missing field 'psi'")
        raw = spec["classes"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("classes must be a non-empty list")
        rates, weights, labels = [], [], []
        for i, entry in enumerate(raw):
            if not isinstance(entry, Mapping):
                raise ConfigError(f"classes[{i}] must be an object")
            for key in ("lambda", "weight"):
                if key not in entry:
                    raise ConfigError(f"classes[{i}] missing field '{key}'")
                if not isinstance(entry[key], (int, float)) or isinstance(entry[key], bool):
                    raise ConfigError(f"classes[{i}].{key} must be a number")
            rates.append(float(entry["lambda"]))
            weights.append(float(entry["weight"]))
            labels.append(str(entry.get("label", "")))
        psi = spec["psi"]
        if not isinstance(psi, (int, float)) or isinstance(psi, bool):
            raise ConfigError("psi must be a number")
        return cls.from_rates(rates, weights, psi, labels)

    def to_dict(self) -> dict:
        classes = []
        for c in self.classes:
            entry = {"lambda": c.rate, "weight": c.weight}
            if c.label:
                entry["label"] = c.label
            classes.append(entry)
        return {"classes": classes, "psi": self.residual.psi}

    @property
    def rates(self) -> np.ndarray:
        return np.array([c.rate for c in self.classes])

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.classes])

    @property
    def labels(self) -> list[str]:
        return [c.label or str(c.index) for c in self.classes]

    @property
    def size(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights such that ``sum(u * f(theta)) ~ E[f(Theta)]``."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def count(self) -> int:
        return len(self.nodes)

    def expect(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def build_gamma_quadrature(residual: ResidualLaw, node_count: int = 64) -> QuadratureRule:
    """
    Gauss rule for the Gamma(1/psi, rate 1/psi) density.

    Generalized Gauss-Laguerre nodes for ``x**(alpha-1) exp(-x)`` are obtained
    by Golub-Welsch on the normalized measure, so the weights are probabilities
    even when ``alpha = 1/psi`` is large enough for Gamma(alpha) to overflow.
    Nodes are then scaled by psi.  Exact for polynomials of degree
    ``2 * node_count - 1``.

    Parameters
    ----------
    residual : ResidualLaw
        Residual effect distribution.
    node_count : int
        Number of nodes J, at least 2.

    Returns
    -------
    QuadratureRule
    """
    if not isinstance(node_count, (int, np.integer)) or node_count < 2:
        raise ConfigError(f"quadrature_nodes must be an integer >= 2, got {node_count}")
    alpha = residual.shape - 1.0
    k = np.arange(node_count, dtype=float)
    diagonal = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    x, vectors = eigh_tridiagonal(diagonal, off)
    w = vectors[0, :] ** 2
    w = w / w.sum()
    return QuadratureRule(nodes=x * residual.psi, weights=w)


def poisson_pmf(mean: float, n) -> np.ndarray | float:
    """Poisson probabilities ``exp(-mean) mean**n / n!`` evaluated in log space."""
    if not mean > 0:
        raise ValueError(f"Poisson mean must be > 0, got {mean}")
    n_arr = np.asarray(n, dtype=float)
    if np.any(n_arr < 0):
        raise ValueError("claim counts must be non-negative")
    out = np.exp(n_arr * np.log(mean) - mean - gammaln(n_arr + 1.0))
    return float(out) if np.ndim(out) == 0 else out


def truncated_pmf(mean: float, pmf: CountPmf = poisson_pmf, tail: float = 1e-12) -> np.ndarray:
    """
    Claim-count probabilities on ``0..N_max`` renormalized to sum to one.

    ``N_max`` is the smallest count whose cumulative probability reaches
    ``1 - tail``.  The cumulative mass is taken relative to a range whose last
    term is negligible, since at large means the summed pmf itself carries
    rounding error well above ``tail``.
    """
    upper = int(np.ceil(mean + 12.0 * np.sqrt(mean) + 30.0))
    while True:
        probs = np.asarray(pmf(mean, np.arange(upper + 1)), dtype=float)
        if probs[-1] < 1e-20 * probs.max():
            break
        if upper > 10_000_000:
            raise ValueError(f"claim-count pmf with mean {mean} has no negligible tail")
        upper *= 2
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    cut = int(np.searchsorted(cdf, 1.0 - tail)) + 1
    probs = probs[:cut]
    return probs / probs.sum()
