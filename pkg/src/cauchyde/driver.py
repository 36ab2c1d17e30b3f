"""Single optimization runs: budget accounting, convergence tracing, guards.

A run owns its private random generator, so independent runs with distinct
seeds are embarrassingly parallel. The driver enforces two invariants on
every run and raises if either breaks: the best fitness never increases
across generations, and the evaluation count never exceeds the budget.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bench import fev
from .core import Budget, evaluate_population, initialize

__all__ = ["RunRecord", "run"]


@dataclass
class RunRecord:
    """Outcome of one seeded run."""

    seed: object
    final_fev: float
    trace: list = field(default_factory=list)  # (nfe, best fev) samples
    wall_time: float = 0.0
    nfe_used: int = 0
    generations: int = 0


def run(algorithm, objective, *, np_size: int = 100, budget: Budget,
        seed=None, rng=None, trace_interval: int | None = None) -> RunRecord:
    """Minimize ``objective`` with ``algorithm`` under ``budget``.

    ``algorithm`` is a stepper with ``step(pop, objective, rng, g_max,
    nfe_cap)`` and ``nominal_cost(np_size)``; stateful steppers are reset
    when they expose ``reset()``, but must not be shared across concurrent
    runs. The trace samples the best function error value on a fixed grid
    of every ``trace_interval`` evaluations (default: one population's
    worth) and is padded to the full grid when the budget is evaluations,
    so traces of sibling runs align.
    """
    t0 = time.perf_counter()
    if rng is None:
        rng = np.random.default_rng(seed)
    if hasattr(algorithm, "reset"):
        algorithm.reset()

    pop = initialize(objective.bounds, np_size, rng)
    evaluate_population(pop, objective)

    nfe_max = budget.nfe_max
    if budget.g_max is not None:
        g_max = budget.g_max
    else:
        per_gen = max(1, algorithm.nominal_cost(np_size))
        g_max = max(1, (nfe_max - np_size) // per_gen)

    interval = np_size if trace_interval is None else int(trace_interval)
    if interval < 1:
        raise ValueError("trace_interval must be positive")

    trace = []
    next_grid = interval
    best = pop.best_fitness

    def sample_trace():
        nonlocal next_grid
        while next_grid <= pop.nfe:
            trace.append((next_grid, fev(objective.f_star, best)))
            next_grid += interval

    sample_trace()
    while not budget.exhausted(pop.g, pop.nfe):
        if nfe_max is not None and pop.nfe >= nfe_max:
            break
        algorithm.step(pop, objective, rng, g_max=g_max, nfe_cap=nfe_max)
        new_best = pop.best_fitness
        if new_best > best:
            raise RuntimeError(
                f"greedy selection violated: best fitness rose from {best} "
                f"to {new_best} at generation {pop.g}")
        if nfe_max is not None and pop.nfe > nfe_max:
            raise RuntimeError(
                f"budget violated: {pop.nfe} evaluations used of {nfe_max}")
        best = new_best
        sample_trace()

    final = fev(objective.f_star, best)
    if nfe_max is not None:
        # the run is over, so the best no longer changes: pad the grid
        while next_grid <= nfe_max:
            trace.append((next_grid, final))
            next_grid += interval
    if not trace or trace[-1][1] != final:
        trace.append((pop.nfe, final))

    return RunRecord(seed=seed, final_fev=final, trace=trace,
                     wall_time=time.perf_counter() - t0,
                     nfe_used=pop.nfe, generations=pop.g)
