"""
An 18-class municipal vehicle fleet portfolio.

Rates come from a Poisson log-link model on entity type and coverage
tercile, with a gamma residual of dispersion 0.782.  The class weights were
not available; the bundled configuration uses products of the marginal
proportions, so the shared-table figures below are indicative only.  The
individualized tables depend on each class alone and are exact.
"""
import numpy as np

from bonus_malus.config import load_config
from bonus_malus.study import run

result = run(load_config("lgpif"))
labels = result.config.portfolio.labels

print("class            lambda   gamma_ind at levels 1, 5, 10")
poi = result.schemes["poi"].gamma
for label, rate, row in zip(labels, result.config.portfolio.rates, poi):
    print(f"{label:15s} {rate:7.3f}   {row[0]:.2f} {row[4]:.2f} {row[9]:.2f}")

print("\nshared tables (approximate weights)")
for name in ("ppos", "pfos"):
    print(f"  {name}:", np.round(result.schemes[name].gamma, 2))
for name in ("ppos", "pfos", "poi"):
    m = result.metrics[name]
    print(f"  {name}: FIX {m.fix_or_zero:.3f}  HMSE {m.hmse:.3f}")
