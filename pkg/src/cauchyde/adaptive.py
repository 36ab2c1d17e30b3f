"""Adaptive single-population DE variants: SaDE, EPSDE, CoDE, JADE, SHADE.

Each variant is a stepper with the same interface as ``cauchy.DE`` and the
same optional Cauchy rescue hook. Rescued individuals bypass the variant's
trial machinery, so their outcomes are not fed back into strategy
probabilities, parameter memories, or combination pools; their failure
counters still follow the global selection rule.

Hyperparameter defaults (learning periods, memory sizes, p fractions)
follow the variants' original publications and are constructor arguments.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .cauchy import (AcmConfig, CmConfig, acm_trial, cauchy_sample, cm_trial,
                     CauchyParams, generation_threshold, should_fire)
from .core import ConfigurationError, apply_selection, repair_bounds
from .strategies import StrategySpec, apply_crossover, mutate

__all__ = [
    "SADE_STRATEGIES",
    "SadeState",
    "sade_update",
    "sade_sample_params",
    "SaDE",
    "EPSDE_STRATEGIES",
    "EPSDE_F_POOL",
    "EPSDE_CR_POOL",
    "EpsdeState",
    "epsde_assign",
    "EPSDE",
    "CodeConfig",
    "code_generate",
    "CoDE",
    "lehmer_mean",
    "jade_sample_params",
    "jade_update_means",
    "JADE",
    "ShadeState",
    "shade_step_memory",
    "SHADE",
]


def _fired_mask(cauchy, pop, afford, g_max):
    if cauchy is None:
        return np.zeros(afford, dtype=bool)
    ft_g = generation_threshold(cauchy, pop.g, g_max)
    return should_fire(pop.fc[:afford], ft_g)


def _rescue_trial(cauchy, pop, i, rng, order):
    if isinstance(cauchy, CmConfig):
        return cm_trial(pop.x[i], pop.x[order[0]], pop.bounds, rng,
                        gamma=cauchy.gamma)
    return acm_trial(pop.x[i], pop, cauchy, rng, sorted_indices=order)


def _afford(pop, nfe_cap, per_member=1):
    n = len(pop)
    if nfe_cap is None:
        return n
    left = (nfe_cap - pop.nfe) // per_member
    if left <= 0:
        raise RuntimeError("no evaluation budget left for this generation")
    return min(n, int(left))


# ---------------------------------------------------------------------------
# SaDE

SADE_STRATEGIES = ("rand/1", "current-to-best/1", "rand/2", "current-to-rand/1")
SADE_EPS = 0.001


@dataclass
class SadeState:
    """Strategy probabilities plus the trailing success/failure window."""

    p: np.ndarray
    crm: np.ndarray
    lp: int = 50
    ns: deque = field(default_factory=deque)  # one count vector per generation
    nf: deque = field(default_factory=deque)
    cr_success: deque = field(default_factory=deque)  # per-gen list of CR lists

    @classmethod
    def fresh(cls, lp: int = 50):
        k = len(SADE_STRATEGIES)
        return cls(p=np.full(k, 1.0 / k), crm=np.full(k, 0.5), lp=lp,
                   ns=deque(maxlen=lp), nf=deque(maxlen=lp),
                   cr_success=deque(maxlen=lp))


def sade_update(state: SadeState) -> np.ndarray:
    """Recompute strategy probabilities from the trailing window.

    Each strategy scores its windowed success rate plus a small floor so no
    probability collapses to zero; an empty window keeps the current
    (initially uniform) probabilities. A strategy never attempted in the
    window scores only the floor.
    """
    if not state.ns:
        return state.p
    ns = np.sum(state.ns, axis=0).astype(float)
    nf = np.sum(state.nf, axis=0).astype(float)
    attempts = ns + nf
    rate = np.divide(ns, attempts, out=np.zeros_like(ns), where=attempts > 0)
    s = rate + SADE_EPS
    state.p = s / s.sum()
    return state.p


def _sade_update_crm(state: SadeState) -> None:
    for k in range(len(SADE_STRATEGIES)):
        used = [cr for gen in state.cr_success for cr in gen[k]]
        if used:
            state.crm[k] = float(np.median(used))


def sade_sample_params(state: SadeState, k: int, rng):
    """Per-individual (F, CR) for strategy ``k``: F is normal(0.5, 0.3) with
    non-positive draws rejected, CR is normal(CRm_k, 0.1) truncated to
    [0, 1]."""
    f = rng.normal(0.5, 0.3)
    while f <= 0.0:
        f = rng.normal(0.5, 0.3)
    cr = float(np.clip(rng.normal(state.crm[k], 0.1), 0.0, 1.0))
    return float(f), cr


class SaDE:
    """Strategy-adaptive DE over four mutation strategies."""

    def __init__(self, lp: int = 50, cauchy=None):
        self.lp = lp
        self.cauchy = cauchy
        self.state = SadeState.fresh(lp)

    def reset(self):
        self.state = SadeState.fresh(self.lp)

    def nominal_cost(self, np_size: int) -> int:
        return np_size

    def step(self, pop, objective, rng, g_max=None, nfe_cap=None):
        state = self.state
        afford = _afford(pop, nfe_cap)
        order = pop.sorted_indices()
        fired = _fired_mask(self.cauchy, pop, afford, g_max)
        assign = rng.choice(len(SADE_STRATEGIES), size=afford, p=state.p)

        trials = np.empty((afford, pop.dimension))
        crs = np.zeros(afford)
        for i in range(afford):
            if fired[i]:
                trials[i] = _rescue_trial(self.cauchy, pop, i, rng, order)
                continue
            k = int(assign[i])
            f, cr = sade_sample_params(state, k, rng)
            crs[i] = cr
            spec = StrategySpec(SADE_STRATEGIES[k], f=f, cr=cr)
            v = mutate(pop, i, spec, rng, sorted_indices=order)
            trials[i] = apply_crossover(pop.x[i], v, spec, rng)
        trials = repair_bounds(trials, pop.bounds, pop.x[:afford])
        trial_fitness = np.asarray(objective(trials), dtype=float)
        pop.nfe += afford
        win = apply_selection(pop, trials, trial_fitness)

        k_count = len(SADE_STRATEGIES)
        ns = np.zeros(k_count, dtype=np.int64)
        nf = np.zeros(k_count, dtype=np.int64)
        cr_used = [[] for _ in range(k_count)]
        for i in range(afford):
            if fired[i]:
                continue
            k = int(assign[i])
            if win[i]:
                ns[k] += 1
                cr_used[k].append(float(crs[i]))
            else:
                nf[k] += 1
        state.ns.append(ns)
        state.nf.append(nf)
        state.cr_success.append(cr_used)
        if len(state.ns) == state.lp:
            sade_update(state)
            _sade_update_crm(state)
        pop.g += 1
        return pop


# ---------------------------------------------------------------------------
# EPSDE

EPSDE_STRATEGIES = ("best/2", "rand/1", "current-to-rand/1")
EPSDE_F_POOL = (0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
EPSDE_CR_POOL = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass
class EpsdeState:
    """Per-individual pool combinations plus the memory of winning ones."""

    combos: list
    memory: list = field(default_factory=list)
    capacity: int = 100


def _epsde_draw(rng):
    kind = EPSDE_STRATEGIES[int(rng.integers(len(EPSDE_STRATEGIES)))]
    f = EPSDE_F_POOL[int(rng.integers(len(EPSDE_F_POOL)))]
    cr = EPSDE_CR_POOL[int(rng.integers(len(EPSDE_CR_POOL)))]
    return kind, f, cr


def epsde_assign(state: EpsdeState, i: int, success: bool, rng):
    """Combination individual ``i`` will use next generation.

    Kept on success; on failure it is replaced by a fresh pool draw or, with
    equal probability, a combination from the success memory (fresh when the
    memory is empty)."""
    if success:
        return state.combos[i]
    take_fresh = rng.random() < 0.5
    if take_fresh or not state.memory:
        state.combos[i] = _epsde_draw(rng)
    else:
        state.combos[i] = state.memory[int(rng.integers(len(state.memory)))]
    return state.combos[i]


class EPSDE:
    """Ensemble-pool DE: per-individual strategy and parameter combinations."""

    def __init__(self, cauchy=None):
        self.cauchy = cauchy
        self.state = None

    def reset(self):
        self.state = None

    def nominal_cost(self, np_size: int) -> int:
        return np_size

    def step(self, pop, objective, rng, g_max=None, nfe_cap=None):
        n = len(pop)
        if self.state is None or len(self.state.combos) != n:
            self.state = EpsdeState(combos=[_epsde_draw(rng) for _ in range(n)],
                                    capacity=n)
        state = self.state
        afford = _afford(pop, nfe_cap)
        order = pop.sorted_indices()
        fired = _fired_mask(self.cauchy, pop, afford, g_max)

        trials = np.empty((afford, pop.dimension))
        for i in range(afford):
            if fired[i]:
                trials[i] = _rescue_trial(self.cauchy, pop, i, rng, order)
                continue
            kind, f, cr = state.combos[i]
            spec = StrategySpec(kind, f=f, cr=cr)
            v = mutate(pop, i, spec, rng, sorted_indices=order)
            trials[i] = apply_crossover(pop.x[i], v, spec, rng)
        trials = repair_bounds(trials, pop.bounds, pop.x[:afford])
        trial_fitness = np.asarray(objective(trials), dtype=float)
        pop.nfe += afford
        win = apply_selection(pop, trials, trial_fitness)

        for i in range(afford):
            if fired[i]:
                continue  # the pool combination was not exercised
            if win[i]:
                state.memory.append(state.combos[i])
                while len(state.memory) > state.capacity:
                    state.memory.pop(0)
            epsde_assign(state, i, bool(win[i]), rng)
        pop.g += 1
        return pop


# ---------------------------------------------------------------------------
# CoDE

@dataclass
class CodeConfig:
    """Three fixed strategies, each paired per candidate with a random
    parameter setting from the shared pool."""

    strategies: tuple = ("rand/1", "rand/2", "current-to-rand/1")
    param_pool: tuple = ((1.0, 0.1), (1.0, 0.9), (0.8, 0.2))


def code_generate(pop, i: int, cfg: CodeConfig, objective, rng,
                  sorted_indices=None, max_candidates: int = 3):
    """Build up to three candidate trials for member ``i`` and keep the best.

    Candidates follow the strategy order; ties keep the earliest. Returns
    ``(trial, fitness, evaluations_used)`` so callers can account for the
    candidate evaluations without re-evaluating the winner.
    """
    if max_candidates < 1:
        raise ValueError("need budget for at least one candidate")
    best_trial = None
    best_fitness = np.inf
    used = 0
    for kind in cfg.strategies[:max_candidates]:
        f, cr = cfg.param_pool[int(rng.integers(len(cfg.param_pool)))]
        spec = StrategySpec(kind, f=f, cr=cr)
        v = mutate(pop, i, spec, rng, sorted_indices=sorted_indices)
        trial = apply_crossover(pop.x[i], v, spec, rng)
        trial = repair_bounds(trial, pop.bounds, pop.x[i])
        fitness = float(objective(trial))
        used += 1
        if fitness < best_fitness:
            best_trial, best_fitness = trial, fitness
    return best_trial, best_fitness, used


class CoDE:
    """Composite DE: best of three differently parameterized candidates."""

    def __init__(self, config: CodeConfig | None = None, cauchy=None):
        self.config = config if config is not None else CodeConfig()
        self.cauchy = cauchy

    def nominal_cost(self, np_size: int) -> int:
        return 3 * np_size

    def step(self, pop, objective, rng, g_max=None, nfe_cap=None):
        n = len(pop)
        afford = _afford(pop, nfe_cap)  # at least one candidate affordable
        order = pop.sorted_indices()
        fired = _fired_mask(self.cauchy, pop, n, g_max)

        trials = []
        fitnesses = []
        for i in range(n):
            left = None if nfe_cap is None else nfe_cap - pop.nfe
            if left is not None and left < 1:
                break
            if fired[i]:
                trial = _rescue_trial(self.cauchy, pop, i, rng, order)
                fitness = float(objective(trial))
                pop.nfe += 1
            else:
                cand = 3 if left is None else min(3, int(left))
                trial, fitness, used = code_generate(
                    pop, i, self.config, objective, rng,
                    sorted_indices=order, max_candidates=cand)
                pop.nfe += used
            trials.append(trial)
            fitnesses.append(fitness)
        if trials:
            apply_selection(pop, np.asarray(trials), np.asarray(fitnesses))
        pop.g += 1
        return pop


# ---------------------------------------------------------------------------
# JADE / SHADE parameter control

def lehmer_mean(values, weights=None) -> float:
    """Contraharmonic mean sum(w v^2) / sum(w v) of positive values."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("Lehmer mean of an empty set")
    if weights is None:
        weights = np.ones_like(values)
    weights = np.asarray(weights, dtype=float)
    return float(np.sum(weights * values * values) / np.sum(weights * values))


def jade_sample_params(mu_f: float, mu_cr: float, rng):
    """Per-individual (F, CR): F is Cauchy(mu_f, 0.1) regenerated while
    non-positive and truncated to 1; CR is normal(mu_cr, 0.1) truncated to
    [0, 1]."""
    f = cauchy_sample(CauchyParams(mu_f, 0.1), rng)
    while f <= 0.0:
        f = cauchy_sample(CauchyParams(mu_f, 0.1), rng)
    f = min(f, 1.0)
    cr = float(np.clip(rng.normal(mu_cr, 0.1), 0.0, 1.0))
    return f, cr


def jade_update_means(mu_f: float, mu_cr: float, s_f, s_cr, c: float = 0.1):
    """Blend the means toward this generation's successful parameters:
    Lehmer mean for F, arithmetic mean for CR. Empty success sets leave the
    means untouched."""
    if not 0.0 <= c <= 1.0:
        raise ValueError("learning rate c must lie in [0, 1]")
    s_f = np.asarray(s_f, dtype=float)
    s_cr = np.asarray(s_cr, dtype=float)
    if s_f.size == 0:
        return mu_f, mu_cr
    new_f = (1.0 - c) * mu_f + c * lehmer_mean(s_f)
    new_cr = (1.0 - c) * mu_cr + c * float(np.mean(s_cr))
    return float(new_f), float(new_cr)


class JADE:
    """Current-to-pbest DE with archive and adaptive scalar means.

    ``kind`` swaps the mutation strategy while keeping the parameter
    control, which is how the multi-population wrappers drive their
    constituents.
    """

    def __init__(self, p: float = 0.1, c: float = 0.1, use_archive: bool = True,
                 cauchy=None, kind: str = "current-to-pbest/1"):
        self.p = p
        self.c = c
        self.kind = kind
        self.use_archive = use_archive
        self.cauchy = cauchy
        self.mu_f = 0.5
        self.mu_cr = 0.5

    def reset(self):
        self.mu_f = 0.5
        self.mu_cr = 0.5

    def nominal_cost(self, np_size: int) -> int:
        return np_size

    def _sample(self, i, rng):
        return jade_sample_params(self.mu_f, self.mu_cr, rng)

    def _learn(self, s_f, s_cr, improvements):
        self.mu_f, self.mu_cr = jade_update_means(self.mu_f, self.mu_cr,
                                                  s_f, s_cr, self.c)

    def step(self, pop, objective, rng, g_max=None, nfe_cap=None):
        afford = _afford(pop, nfe_cap)
        order = pop.sorted_indices()
        fired = _fired_mask(self.cauchy, pop, afford, g_max)

        trials = np.empty((afford, pop.dimension))
        fs = np.zeros(afford)
        crs = np.zeros(afford)
        for i in range(afford):
            if fired[i]:
                trials[i] = _rescue_trial(self.cauchy, pop, i, rng, order)
                continue
            f, cr = self._sample(i, rng)
            fs[i], crs[i] = f, cr
            spec = StrategySpec(self.kind, f=f, cr=cr, p=self.p,
                                use_archive=self.use_archive)
            v = mutate(pop, i, spec, rng, sorted_indices=order)
            trials[i] = apply_crossover(pop.x[i], v, spec, rng)
        trials = repair_bounds(trials, pop.bounds, pop.x[:afford])
        trial_fitness = np.asarray(objective(trials), dtype=float)
        pop.nfe += afford
        before = pop.fitness[:afford].copy()
        win = apply_selection(pop, trials, trial_fitness, rng,
                              use_archive=self.use_archive)

        keep = win & ~fired
        improvements = before[keep] - trial_fitness[keep]
        self._learn(fs[keep], crs[keep], improvements)
        pop.g += 1
        return pop


@dataclass
class ShadeState:
    """Historical parameter memories and the per-generation success sets."""

    m_f: np.ndarray
    m_cr: np.ndarray
    cursor: int = 0
    s_f: list = field(default_factory=list)
    s_cr: list = field(default_factory=list)

    @classmethod
    def fresh(cls, h: int):
        return cls(m_f=np.full(h, 0.5), m_cr=np.full(h, 0.5))


def shade_step_memory(state: ShadeState, improvements) -> ShadeState:
    """Write this generation's weighted means into the cursor entry.

    Weights are the normalized fitness improvements of the successful
    trials. With no successes the memories stay untouched and the cursor
    does not advance. The success sets are cleared either way.
    """
    if state.s_f:
        w = np.asarray(improvements, dtype=float)
        if w.size != len(state.s_f):
            raise ValueError("one improvement weight per success entry required")
        total = w.sum()
        w = np.full_like(w, 1.0 / w.size) if total <= 0 else w / total
        state.m_f[state.cursor] = lehmer_mean(state.s_f, w)
        state.m_cr[state.cursor] = float(np.sum(w * np.asarray(state.s_cr)))
        state.cursor = (state.cursor + 1) % len(state.m_f)
    state.s_f = []
    state.s_cr = []
    return state


class SHADE(JADE):
    """JADE with success-history parameter memories instead of scalar means."""

    def __init__(self, p: float = 0.1, h: int | None = None,
                 use_archive: bool = True, cauchy=None):
        super().__init__(p=p, c=0.0, use_archive=use_archive, cauchy=cauchy)
        self.h = h
        self.state = None

    def reset(self):
        self.state = None

    def _sample(self, i, rng):
        r = int(rng.integers(len(self.state.m_f)))
        return jade_sample_params(self.state.m_f[r], self.state.m_cr[r], rng)

    def _learn(self, s_f, s_cr, improvements):
        self.state.s_f = list(s_f)
        self.state.s_cr = list(s_cr)
        shade_step_memory(self.state, improvements)

    def step(self, pop, objective, rng, g_max=None, nfe_cap=None):
        if self.state is None:
            self.state = ShadeState.fresh(self.h if self.h else len(pop))
        return super().step(pop, objective, rng, g_max=g_max, nfe_cap=nfe_cap)
