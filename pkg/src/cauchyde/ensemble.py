"""Multi-population wrappers with a reward subpopulation.

The population is split into three equal small subpopulations, each owned
by one constituent search engine, plus one larger reward subpopulation.
Every generation takes four sub-steps: each small subpopulation under its
constituent, then the reward subpopulation under the constituent currently
holding the reward. Every ``lp`` generations the reward is re-bound to the
constituent with the best cumulative fitness improvement per evaluation,
the counters reset, and the membership is reshuffled uniformly.

Per-individual and per-window constituent state cannot straddle the two
subpopulation sizes, so each constituent runs one engine instance for its
small subpopulation and a separate one (restarted at every rebinding) for
the reward subpopulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .adaptive import EPSDE, CoDE, JADE
from .core import ConfigurationError, Population

__all__ = [
    "EnsembleState",
    "reassign_reward",
    "MPEDE",
    "EDEV",
]


@dataclass
class EnsembleState:
    """Partition bookkeeping for a multi-population run."""

    membership: list                 # three small index arrays plus the reward one
    reward_owner: int
    lp: int
    improvement: np.ndarray = field(default_factory=lambda: np.zeros(3))
    evals: np.ndarray = field(default_factory=lambda: np.zeros(3))


def reassign_reward(state: EnsembleState, g: int) -> EnsembleState:
    """Re-bind the reward subpopulation to the most improving constituent.

    Only valid at a learning-period boundary. The score is cumulative
    fitness improvement per evaluation over the closing window; ties go to
    the lowest constituent index. Counters reset for the next window.
    """
    if g <= 0 or g % state.lp != 0:
        raise ValueError("reward reassignment only happens at lp boundaries")
    rates = np.divide(state.improvement, state.evals,
                      out=np.zeros_like(state.improvement),
                      where=state.evals > 0)
    state.reward_owner = int(np.argmax(rates))
    state.improvement[:] = 0.0
    state.evals[:] = 0.0
    return state


class _MultiPopulation:
    """Shared stepping logic for the reward-subpopulation wrappers."""

    def __init__(self, factories, ratios, lp):
        if len(factories) != 3 or len(ratios) != 3:
            raise ConfigurationError("exactly three constituents are supported")
        if sum(ratios) >= 1.0 or any(r <= 0 for r in ratios):
            raise ConfigurationError("small-subpopulation ratios must be positive "
                                     "and leave room for the reward subpopulation")
        self.factories = list(factories)
        self.ratios = tuple(ratios)
        self.lp = int(lp)
        self.reset()

    def reset(self):
        self.state = None
        self.small_engines = [f() for f in self.factories]
        self.reward_engines = [f() for f in self.factories]
        self.archives = {}

    def partition_sizes(self, np_size: int):
        small = [int(round(r * np_size)) for r in self.ratios]
        reward = np_size - sum(small)
        if min(small) < 4 or reward < 4:
            raise ConfigurationError(
                f"population of {np_size} leaves subpopulations too small "
                f"({small + [reward]})")
        return small + [reward]

    def nominal_cost(self, np_size: int) -> int:
        sizes = self.partition_sizes(np_size)
        cost = sum(e.nominal_cost(s) for e, s in zip(self.small_engines, sizes[:3]))
        return cost + self.reward_engines[0].nominal_cost(sizes[3])

    def _init_state(self, pop, rng):
        sizes = self.partition_sizes(len(pop))
        perm = rng.permutation(len(pop))
        cuts = np.cumsum(sizes)[:-1]
        membership = [np.sort(part) for part in np.split(perm, cuts)]
        owner = int(rng.integers(len(self.factories)))
        self.state = EnsembleState(membership=membership, reward_owner=owner,
                                   lp=self.lp)

    def _reshuffle(self, pop, rng):
        sizes = [idx.size for idx in self.state.membership]
        perm = rng.permutation(len(pop))
        cuts = np.cumsum(sizes)[:-1]
        self.state.membership = [np.sort(part) for part in np.split(perm, cuts)]

    def _substep(self, pop, idx, engine, credit_to, archive_key, objective, rng,
                 g_max, nfe_cap):
        remaining = None if nfe_cap is None else nfe_cap - pop.nfe
        if remaining is not None and remaining < 1:
            return
        sub = Population(pop.x[idx].copy(), pop.bounds,
                         fitness=pop.fitness[idx].copy(),
                         fc=pop.fc[idx].copy(), g=pop.g, nfe=0,
                         archive=self.archives.get(archive_key, []),
                         archive_capacity=idx.size)
        before = sub.fitness.copy()
        engine.step(sub, objective, rng, g_max=g_max, nfe_cap=remaining)
        pop.x[idx] = sub.x
        pop.fitness[idx] = sub.fitness
        pop.fc[idx] = sub.fc
        pop.nfe += sub.nfe
        self.archives[archive_key] = sub.archive
        self.state.improvement[credit_to] += float(np.sum(before - sub.fitness))
        self.state.evals[credit_to] += sub.nfe

    def step(self, pop, objective, rng, g_max=None, nfe_cap=None):
        if self.state is None:
            self._init_state(pop, rng)
        elif pop.g > 0 and pop.g % self.lp == 0:
            reassign_reward(self.state, pop.g)
            self._reshuffle(pop, rng)
            owner = self.state.reward_owner
            self.reward_engines[owner] = self.factories[owner]()
            self.archives.pop("reward", None)
        for j in range(3):
            self._substep(pop, self.state.membership[j], self.small_engines[j],
                          j, ("small", j), objective, rng, g_max, nfe_cap)
        owner = self.state.reward_owner
        self._substep(pop, self.state.membership[3], self.reward_engines[owner],
                      owner, "reward", objective, rng, g_max, nfe_cap)
        pop.g += 1
        return pop


class MPEDE(_MultiPopulation):
    """Three mutation strategies under adaptive parameter control, with the
    reward subpopulation following whichever currently improves fastest."""

    def __init__(self, ratios=(0.2, 0.2, 0.2), lp: int = 20, p: float = 0.1,
                 c: float = 0.1, cauchy=None):
        factories = [
            lambda: JADE(p=p, c=c, use_archive=True, cauchy=cauchy,
                         kind="current-to-pbest/1"),
            lambda: JADE(p=p, c=c, use_archive=False, cauchy=cauchy,
                         kind="current-to-rand/1"),
            lambda: JADE(p=p, c=c, use_archive=False, cauchy=cauchy,
                         kind="rand/1"),
        ]
        super().__init__(factories, ratios, lp)


class EDEV(_MultiPopulation):
    """Three full adaptive variants sharing one population, with the reward
    subpopulation following whichever currently improves fastest."""

    def __init__(self, ratios=(0.1, 0.1, 0.1), lp: int = 50, cauchy=None):
        factories = [lambda: JADE(cauchy=cauchy), lambda: CoDE(cauchy=cauchy),
                     lambda: EPSDE(cauchy=cauchy)]
        super().__init__(factories, ratios, lp)
