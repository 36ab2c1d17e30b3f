"""Cauchy distribution machinery and failure-triggered trial generation.

Two rescue operators are provided for individuals whose trials keep losing
selection. The classic one perturbs the generation-start best member with
component-wise Cauchy noise under a fixed failure threshold. The advanced
one centers the perturbation on a random top-p member, picks its crossover
rate from {0.1, 0.9}, and drives the threshold along a sigmoid (or linear)
schedule from a generous initial value down to an aggressive final one, so
rescues are rare while the population is still exploring and frequent once
it should be converging.

Draw orders, for anyone replaying recorded streams:
``cm_trial``  - j_rand, per-component uniforms, Cauchy uniforms (fired
components only, ascending index).
``acm_trial`` - p-best index, j_rand, the rate pick, per-component
uniforms, Cauchy uniforms.
``acm_de_step`` - batched base-strategy draws first (see
``strategies.make_trials``), then fired individuals in ascending index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigurationError, apply_selection, repair_bounds
from .strategies import StrategySpec, make_trials

__all__ = [
    "CauchyParams",
    "cauchy_pdf",
    "cauchy_cdf",
    "cauchy_sample",
    "SCHEDULE_FAMILIES",
    "ScheduleSpec",
    "threshold",
    "should_fire",
    "CmConfig",
    "AcmConfig",
    "cm_trial",
    "acm_trial",
    "generation_threshold",
    "acm_de_step",
    "DE",
]


@dataclass
class CauchyParams:
    """Location and scale of a univariate Cauchy distribution."""

    x0: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigurationError("Cauchy scale gamma must be positive")


def cauchy_pdf(x, params: CauchyParams):
    """Density gamma / (pi ((x - x0)^2 + gamma^2))."""
    g = params.gamma
    return (g / np.pi) / ((np.asarray(x, dtype=float) - params.x0) ** 2 + g * g)


def cauchy_cdf(x, params: CauchyParams):
    """Cumulative probability arctan((x - x0)/gamma)/pi + 1/2."""
    z = (np.asarray(x, dtype=float) - params.x0) / params.gamma
    return np.arctan(z) / np.pi + 0.5


def _open_uniform(rng, size=None):
    # u in (0, 1): redraw the measure-zero exact zeros from random()
    u = rng.random(size)
    if size is None:
        while u == 0.0:
            u = rng.random()
        return u
    while True:
        zero = u == 0.0
        if not zero.any():
            return u
        u[zero] = rng.random(int(zero.sum()))


def cauchy_sample(params: CauchyParams, rng) -> float:
    """Inverse-CDF sample x0 + gamma tan(pi (u - 1/2)), u uniform in (0, 1)."""
    u = _open_uniform(rng)
    return params.x0 + params.gamma * math.tan(math.pi * (u - 0.5))


def _cauchy_row(centers, gamma: float, rng) -> np.ndarray:
    """One inverse-CDF sample per center, sharing the scalar sampler's math."""
    u = _open_uniform(rng, np.size(centers))
    return np.asarray(centers, dtype=float) + gamma * np.tan(np.pi * (u - 0.5))


SCHEDULE_FAMILIES = ("SFTD", "SFTI", "LFTD", "LFTI", "constant")


@dataclass
class ScheduleSpec:
    """Failure-threshold schedule.

    SFTD/SFTI move the threshold from ft_init to ft_fin along a sigmoid in
    normalized generation time (decreasing resp. increasing); LFTD/LFTI do
    the same linearly; constant pins it at ft_init. The sigmoid argument
    sweeps [lb, ub], so its endpoints are not exactly ft_init/ft_fin.
    """

    family: str = "SFTD"
    ft_init: float = 100.0
    ft_fin: float | None = 5.0
    lb: float = -6.0
    ub: float = 6.0

    def __post_init__(self):
        if self.family not in SCHEDULE_FAMILIES:
            raise ConfigurationError(f"unknown schedule family {self.family!r}")
        if self.ft_init < 1:
            raise ConfigurationError("ft_init must be at least 1")
        if self.family == "constant":
            self.ft_fin = float(self.ft_init) if self.ft_fin is None else float(self.ft_fin)
            return
        if self.ft_fin is None or self.ft_fin < 1:
            raise ConfigurationError("ft_fin must be at least 1")
        if self.family in ("SFTD", "LFTD") and self.ft_fin > self.ft_init:
            raise ConfigurationError("a decreasing schedule needs ft_fin <= ft_init")
        if self.family in ("SFTI", "LFTI") and self.ft_fin < self.ft_init:
            raise ConfigurationError("an increasing schedule needs ft_fin >= ft_init")
        if not self.lb < self.ub:
            raise ConfigurationError("sigmoid range needs lb < ub")


def threshold(schedule: ScheduleSpec, g: int, g_max: int) -> float:
    """Failure threshold at generation ``g`` of ``g_max``."""
    if g_max <= 0:
        raise ValueError("g_max must be positive")
    if not 0 <= g <= g_max:
        raise ValueError(f"generation {g} outside [0, {g_max}]")
    if schedule.family == "constant":
        return float(schedule.ft_init)
    x = g / g_max
    if schedule.family in ("SFTD", "SFTI"):
        w = 1.0 / (1.0 + math.exp(-(schedule.lb + x * (schedule.ub - schedule.lb))))
    else:
        w = x
    return float(schedule.ft_init + w * (schedule.ft_fin - schedule.ft_init))


def should_fire(fc, ft_g: float):
    """Whether a failure streak triggers the Cauchy rescue.

    The real-valued threshold is rounded to the nearest integer T (at least
    1); the rescue fires at fc == T and re-fires every further T straight
    failures via the modulo test. Accepts a scalar or an array of counters.
    """
    t = max(1, int(round(float(ft_g))))
    fc = np.asarray(fc)
    fired = (fc >= t) & (fc % t == 0)
    return bool(fired) if fired.ndim == 0 else fired


@dataclass
class CmConfig:
    """Classic best-centered Cauchy rescue with one fixed threshold."""

    ft: float = 5.0
    gamma: float = 0.1

    def __post_init__(self):
        if self.ft < 1:
            raise ConfigurationError("failure threshold must be at least 1")
        if not self.gamma > 0:
            raise ConfigurationError("Cauchy scale gamma must be positive")


@dataclass
class AcmConfig:
    """Scheduled p-best Cauchy rescue.

    ``p`` is the fraction of the population eligible as perturbation
    centers and ``cr_choices`` are the two equally likely crossover rates.
    """

    schedule: ScheduleSpec = field(default_factory=ScheduleSpec)
    p: float = 0.1
    gamma: float = 0.1
    cr_choices: tuple = (0.1, 0.9)

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ConfigurationError("p-best fraction must lie in (0, 1]")
        if not self.gamma > 0:
            raise ConfigurationError("Cauchy scale gamma must be positive")
        if len(self.cr_choices) != 2:
            raise ConfigurationError("cr_choices must hold exactly two rates")


def cm_trial(target_x, best_x, bounds, rng, gamma: float = 0.1) -> np.ndarray:
    """Classic Cauchy rescue trial: each component takes a Cauchy sample
    centered on the best member when its uniform falls below 0.5 (or it is
    the forced j_rand component) and keeps the target value otherwise.
    The result is bound-repaired against the target."""
    target_x = np.asarray(target_x, dtype=float)
    d = target_x.size
    j_rand = int(rng.integers(d))
    mask = rng.random(d) < 0.5
    mask[j_rand] = True
    trial = target_x.copy()
    trial[mask] = _cauchy_row(np.asarray(best_x, dtype=float)[mask], gamma, rng)
    return repair_bounds(trial, bounds, target_x)


def acm_trial(target_x, pop, cfg: AcmConfig, rng, sorted_indices=None) -> np.ndarray:
    """Scheduled rescue trial centered on a random top-p member.

    The crossover rate is 0.1 or 0.9 with equal probability and the
    component test is inclusive (u <= cr). Bound-repaired against the
    target."""
    target_x = np.asarray(target_x, dtype=float)
    order = pop.sorted_indices() if sorted_indices is None else sorted_indices
    pool = max(1, int(np.ceil(cfg.p * len(pop))))
    center = pop.x[order[int(rng.integers(pool))]]
    d = target_x.size
    j_rand = int(rng.integers(d))
    cr = cfg.cr_choices[0] if rng.random() < 0.5 else cfg.cr_choices[1]
    mask = rng.random(d) <= cr
    mask[j_rand] = True
    trial = target_x.copy()
    trial[mask] = _cauchy_row(center[mask], cfg.gamma, rng)
    return repair_bounds(trial, pop.bounds, target_x)


def generation_threshold(cfg, g: int, g_max: int | None) -> float:
    """Failure threshold the rescue operator uses for generation ``g``."""
    if isinstance(cfg, CmConfig):
        return cfg.ft
    if cfg.schedule.family == "constant":
        return float(cfg.schedule.ft_init)
    if g_max is None:
        raise ConfigurationError("a scheduled failure threshold needs g_max")
    return threshold(cfg.schedule, min(g, g_max), g_max)


def acm_de_step(pop, base: StrategySpec, cfg, objective, rng, *,
                g_max: int | None = None, nfe_cap: int | None = None):
    """Advance the population one generation in place and return it.

    Each member gets a trial from the base strategy unless its failure
    counter fires the Cauchy rescue (``cfg`` may be None for plain DE, a
    CmConfig, or an AcmConfig; the threshold is computed once per
    generation). Trials are bound-repaired, evaluated in one batch, and
    compete one-to-one with their targets; failure counters update in the
    selection sweep. When ``nfe_cap`` leaves fewer evaluations than members,
    only the lowest-indexed members receive trials.
    """
    if not pop.evaluated:
        raise RuntimeError("evaluate the population before stepping")
    n = len(pop)
    afford = n if nfe_cap is None else min(n, nfe_cap - pop.nfe)
    if afford <= 0:
        raise RuntimeError("no evaluation budget left for this generation")

    order = pop.sorted_indices()
    active = np.arange(afford)
    if cfg is not None:
        ft_g = generation_threshold(cfg, pop.g, g_max)
        fired = should_fire(pop.fc[:afford], ft_g)
    else:
        fired = np.zeros(afford, dtype=bool)

    trials = np.empty((afford, pop.dimension))
    base_rows = active[~fired]
    if base_rows.size:
        trials[base_rows] = make_trials(pop, base_rows, base, rng, order)
    for i in active[fired]:
        if isinstance(cfg, CmConfig):
            trials[i] = cm_trial(pop.x[i], pop.x[order[0]], pop.bounds, rng,
                                 gamma=cfg.gamma)
        else:
            trials[i] = acm_trial(pop.x[i], pop, cfg, rng, sorted_indices=order)

    trials = repair_bounds(trials, pop.bounds, pop.x[:afford])
    trial_fitness = np.asarray(objective(trials), dtype=float)
    pop.nfe += afford
    apply_selection(pop, trials, trial_fitness, rng, use_archive=base.use_archive)
    pop.g += 1
    return pop


class DE:
    """Single-strategy DE, optionally wrapped with a Cauchy rescue operator."""

    def __init__(self, spec: StrategySpec | None = None, cauchy=None):
        self.spec = spec if spec is not None else StrategySpec()
        self.cauchy = cauchy

    def nominal_cost(self, np_size: int) -> int:
        return np_size

    def step(self, pop, objective, rng, g_max=None, nfe_cap=None):
        return acm_de_step(pop, self.spec, self.cauchy, objective, rng,
                           g_max=g_max, nfe_cap=nfe_cap)
