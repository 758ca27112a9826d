"""Evaluate every requested scheme of a scenario on one moment kernel."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain import LevelLaw, MixedLevelMoments, level_law, mixed_level_moments
from .config import ScenarioConfig
from .frequency import build_gamma_quadrature
from .metrics import SchemeMetrics, alt_fairness_measure, scheme_metrics
from .schemes import (DescentTrace, debias_priori, pfos, pno, poi, ppos,
                      pure_relativity_view)

# row order of the summary table; pfos* and debias are reported without deltas
ORDER = ("pno", "ppos", "pfos", "pfos*", "poi", "debias")
DELTA_CHAIN = ("pno", "ppos", "pfos", "poi")


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    moments: MixedLevelMoments
    levels: LevelLaw
    schemes: dict = field(default_factory=dict)
    metrics: dict[str, SchemeMetrics] = field(default_factory=dict)
    trace: DescentTrace | None = None
    alt_fairness: float | None = None

    def deltas(self) -> dict[str, dict[str, float]]:
        """
        Sequential changes along PNO -> PPOS -> PFOS -> POI.

        ``*_pct`` values are normalized by the largest FIX (resp. HMSE) among
        the chain members present; ``*_raw`` are plain differences.
        """
        present = [n for n in DELTA_CHAIN if n in self.metrics]
        fixes = {n: self.metrics[n].fix_or_zero for n in present}
        hmses = {n: self.metrics[n].hmse for n in present}
        max_fix = max(fixes.values(), default=0.0)
        max_hmse = max(hmses.values(), default=0.0)
        out = {}
        for prev, cur in zip(present, present[1:]):
            d_fix = fixes[cur] - fixes[prev]
            d_hmse = hmses[cur] - hmses[prev]
            out[cur] = {
                "fix_raw": d_fix,
                "fix_pct": 100.0 * d_fix / max_fix if max_fix > 0 else float("nan"),
                "hmse_raw": d_hmse,
                "hmse_pct": 100.0 * d_hmse / max_hmse if max_hmse > 0 else float("nan"),
            }
        return out


def run(config: ScenarioConfig) -> ScenarioResult:
    quad = build_gamma_quadrature(config.portfolio.residual, config.quadrature_nodes)
    moments = mixed_level_moments(config.portfolio, config.rule, quad)
    result = ScenarioResult(config, moments, level_law(moments))
    z = config.rule.levels
    wanted = set(config.schemes)
    if "pno" in wanted:
        result.schemes["pno"] = pno(config.portfolio, z)
    if wanted & {"ppos", "debias"}:
        shared_p = ppos(moments)
        if "ppos" in wanted:
            result.schemes["ppos"] = shared_p
        if "debias" in wanted:
            result.schemes["debias"] = debias_priori(shared_p.gamma, moments)
    if "pfos" in wanted:
        opts = config.pfos
        scheme, trace = pfos(moments, opts.q, init=opts.init, tolerance=opts.tolerance,
                             max_cycles=opts.max_cycles)
        result.schemes["pfos"] = scheme
        result.schemes["pfos*"] = pure_relativity_view(scheme, config.portfolio)
        result.trace = trace
    if "poi" in wanted:
        result.schemes["poi"] = poi(moments)
    result.schemes = {k: result.schemes[k] for k in ORDER if k in result.schemes}
    result.metrics = {k: scheme_metrics(s, moments) for k, s in result.schemes.items()}
    if config.portfolio.size >= 2 and np.ptp(config.portfolio.rates) > 0:
        result.alt_fairness = alt_fairness_measure(moments)
    return result


def run_trace(config: ScenarioConfig) -> DescentTrace:
    quad = build_gamma_quadrature(config.portfolio.residual, config.quadrature_nodes)
    moments = mixed_level_moments(config.portfolio, config.rule, quad)
    opts = config.pfos
    return pfos(moments, opts.q, init=opts.init, tolerance=opts.tolerance,
                max_cycles=opts.max_cycles)[1]
