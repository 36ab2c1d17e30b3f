"""Population lifecycle for differential evolution.

Bounded uniform initialization, greedy one-to-one selection with
consecutive-failure counting, and midpoint bound repair. Everything here
follows the minimization convention; negate the objective to maximize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConfigurationError",
    "Bounds",
    "Individual",
    "Population",
    "Budget",
    "initialize",
    "select",
    "repair_bounds",
    "evaluate_population",
    "apply_selection",
]


class ConfigurationError(ValueError):
    """An algorithm, schedule, or experiment was configured inconsistently."""


@dataclass
class Bounds:
    """Box constraints given as per-dimension lower and upper limits."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape:
            raise ConfigurationError("lower and upper must be 1-D and equally long")
        if not np.all(self.lower < self.upper):
            raise ConfigurationError("need lower[j] < upper[j] in every dimension")

    @classmethod
    def cube(cls, lower, upper, dimension):
        """Same [lower, upper] interval in every dimension."""
        return cls(np.full(dimension, float(lower)), np.full(dimension, float(upper)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Individual:
    """One population member: position, cached objective value, failure streak.

    ``fc`` counts consecutive generations in which this member's trial lost
    the selection contest; it is reset to zero by every successful selection.
    """

    x: np.ndarray
    fitness: float = math.nan
    fc: int = 0

    @property
    def evaluated(self) -> bool:
        return not math.isnan(self.fitness)


@dataclass
class Budget:
    """Termination budget: generations, function evaluations, or both."""

    g_max: int | None = None
    nfe_max: int | None = None

    def __post_init__(self):
        if self.g_max is None and self.nfe_max is None:
            raise ConfigurationError("budget needs g_max or nfe_max")
        if self.g_max is not None and self.g_max <= 0:
            raise ConfigurationError("g_max must be positive")
        if self.nfe_max is not None and self.nfe_max <= 0:
            raise ConfigurationError("nfe_max must be positive")

    def exhausted(self, g: int, nfe: int) -> bool:
        if self.g_max is not None and g >= self.g_max:
            return True
        if self.nfe_max is not None and nfe >= self.nfe_max:
            return True
        return False


class Population:
    """Fixed-size population stored as arrays, plus the donor archive.

    The archive holds recently discarded target vectors for the
    current-to-pbest mutation; it is capped at ``archive_capacity`` entries
    with uniform-random eviction.
    """

    def __init__(self, x, bounds, fitness=None, fc=None, g=0, nfe=0,
                 archive=None, archive_capacity=None):
        self.x = np.asarray(x, dtype=float)
        if self.x.ndim != 2:
            raise ConfigurationError("population must be an (NP, D) array")
        self.bounds = bounds
        n = len(self.x)
        self.fitness = (np.full(n, np.nan) if fitness is None
                        else np.asarray(fitness, dtype=float))
        self.fc = (np.zeros(n, dtype=np.int64) if fc is None
                   else np.asarray(fc, dtype=np.int64))
        self.g = int(g)
        self.nfe = int(nfe)
        self.archive = [] if archive is None else list(archive)
        self.archive_capacity = n if archive_capacity is None else int(archive_capacity)

    def __len__(self) -> int:
        return len(self.x)

    @property
    def dimension(self) -> int:
        return self.x.shape[1]

    @property
    def evaluated(self) -> bool:
        return not np.isnan(self.fitness).any()

    @property
    def best_index(self) -> int:
        if not self.evaluated:
            raise RuntimeError("population fitness not evaluated")
        return int(np.argmin(self.fitness))

    @property
    def best_fitness(self) -> float:
        return float(self.fitness[self.best_index])

    @property
    def best_x(self) -> np.ndarray:
        return self.x[self.best_index].copy()

    def sorted_indices(self) -> np.ndarray:
        """Member indices from best to worst fitness (stable on ties)."""
        return np.argsort(self.fitness, kind="stable")

    @property
    def members(self) -> list:
        """Individual views of the current members (positions are copies)."""
        return [Individual(self.x[i].copy(), float(self.fitness[i]), int(self.fc[i]))
                for i in range(len(self))]

    def push_archive(self, x, rng) -> None:
        self.archive.append(np.array(x, dtype=float, copy=True))
        while len(self.archive) > self.archive_capacity:
            del self.archive[int(rng.integers(len(self.archive)))]


def initialize(bounds: Bounds, np_size: int, rng) -> Population:
    """Spread ``np_size`` members uniformly over the box.

    Component j of member i is lower[j] + u*(upper[j] - lower[j]) with u
    drawn once per component from U[0, 1). Fitness is left unevaluated.
    Draws one (np_size, D) uniform block from ``rng``.
    """
    if np_size < 4:
        raise ConfigurationError("population size must be at least 4")
    u = rng.random((np_size, bounds.dimension))
    return Population(bounds.lower + u * bounds.span, bounds)


def select(target: Individual, trial: Individual):
    """Greedy one-to-one selection; ties go to the trial.

    Returns ``(winner, success)``. The winner's failure counter is updated
    in place: reset to zero when the trial wins, incremented otherwise.
    """
    if not (target.evaluated and trial.evaluated):
        raise RuntimeError("select requires evaluated fitness on both sides")
    if trial.fitness <= target.fitness:
        trial.fc = 0
        return trial, True
    target.fc += 1
    return target, False


def repair_bounds(x, bounds: Bounds, parent):
    """Replace out-of-bounds components with the midpoint of the parent and
    the violated bound. Accepts a single vector or an (N, D) block with a
    matching parent block; feasible input is returned unchanged.
    """
    x = np.asarray(x, dtype=float)
    parent = np.asarray(parent, dtype=float)
    below = x < bounds.lower
    above = x > bounds.upper
    if not (below.any() or above.any()):
        return x
    out = np.where(below, 0.5 * (bounds.lower + parent), x)
    out = np.where(above, 0.5 * (bounds.upper + parent), out)
    return out


def evaluate_population(pop: Population, objective) -> None:
    """Evaluate every member in one batch and charge NP evaluations."""
    pop.fitness = np.asarray(objective(pop.x), dtype=float)
    pop.nfe += len(pop)


def apply_selection(pop: Population, trials, trial_fitness, rng=None,
                    use_archive: bool = False) -> np.ndarray:
    """Vectorized greedy sweep over the first ``len(trials)`` members.

    Same contest as ``select``, applied to a block: a trial replaces its
    target when its fitness is less than or equal, resetting that failure
    counter; losing trials increment it. Replaced targets are pushed to the
    archive when ``use_archive``. Returns the success mask.
    """
    trial_fitness = np.asarray(trial_fitness, dtype=float)
    m = len(trial_fitness)
    win = trial_fitness <= pop.fitness[:m]
    if use_archive:
        for i in np.nonzero(win)[0]:
            pop.push_archive(pop.x[i], rng)
    pop.x[:m] = np.where(win[:, None], trials, pop.x[:m])
    pop.fitness[:m] = np.where(win, trial_fitness, pop.fitness[:m])
    pop.fc[:m] = np.where(win, 0, pop.fc[:m] + 1)
    return win
