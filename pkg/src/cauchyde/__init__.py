"""Differential evolution with failure-triggered Cauchy mutations.

A numpy library covering the classical DE operators, two Cauchy rescue
operators for stagnating individuals (a fixed-threshold best-centered one
and a schedule-driven p-best one), four adaptive variants, two
multi-population ensembles, a benchmark suite, signed-rank comparison
tables, and a seeded experiment harness.
"""

from .adaptive import (EPSDE, JADE, SHADE, CoDE, CodeConfig, EpsdeState, SaDE,
                       SadeState, ShadeState, code_generate, epsde_assign,
                       jade_sample_params, jade_update_means, lehmer_mean,
                       sade_sample_params, sade_update, shade_step_memory)
from .bench import Objective, fev, get_objective, list_functions, load_cec_suite, suite
from .cauchy import (DE, AcmConfig, CauchyParams, CmConfig, ScheduleSpec,
                     acm_de_step, acm_trial, cauchy_cdf, cauchy_pdf,
                     cauchy_sample, cm_trial, should_fire, threshold)
from .core import (Bounds, Budget, ConfigurationError, Individual, Population,
                   apply_selection, evaluate_population, initialize,
                   repair_bounds, select)
from .driver import RunRecord, run
from .ensemble import EDEV, MPEDE, EnsembleState, reassign_reward
from .experiments import (ExperimentArchive, ExperimentConfig, PRESETS,
                          build_algorithm, derive_seed, preset, run_experiment,
                          trace_quantiles)
from .stats import (ComparisonCell, ComparisonTable, PairedSample,
                    build_comparison_table, wilcoxon_signed_rank)
from .strategies import (DonorDraw, MUTATION_KINDS, StrategySpec, apply_crossover,
                         crossover_binomial, crossover_exponential, draw_donors,
                         exponential_segment, make_trials, mutate)

__version__ = "0.1.0"
