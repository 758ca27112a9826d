"""Bonus-malus relativity tables and double-counting diagnostics."""
from .chain import (LevelLaw, MixedLevelMoments, TransitionRule, build_transition_matrix,
                    level_law, mixed_level_moments, stationary_distribution)
from .errors import (BonusMalusError, ConfigError, ConvergenceError, NumericalError,
                     StationarySolveError, UnreachableLevelError)
from .frequency import (Portfolio, QuadratureRule, RateClass, ResidualLaw,
                        build_gamma_quadrature, poisson_pmf)
from .metrics import (SchemeMetrics, alt_fairness_measure, conditional_premium_means,
                      conditional_pure_relativity_means,
                      conditional_relativity_means, fix, hmse, scheme_metrics)
from .schemes import (DescentTrace, IndividualizedScheme, SharedScheme, TraceStep,
                      bayesian_posterior_mean, debias_priori, pfos, pno, poi, ppos,
                      pure_relativity_view)

__version__ = "0.1.0"
