"""Mutation strategies and crossover operators.

Seven classical strategies plus current-to-pbest/1 are supported. Donor
vectors are always mutually distinct and never equal to the target index.
Vectors here are generation-start snapshots; callers must not feed a
half-updated population.

Random draw order (relevant when replaying recorded streams):
``mutate`` draws the p-best index first (p-best kinds only), then the
donor indices, then the recombination weight K (current-to-rand/1 only).
``make_trials`` draws per generation: donor columns left to right, then
p-best indices, then K, then j_rand, then the crossover uniforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigurationError

__all__ = [
    "MUTATION_KINDS",
    "StrategySpec",
    "DonorDraw",
    "donor_count",
    "draw_donors",
    "mutate",
    "crossover_binomial",
    "crossover_exponential",
    "exponential_segment",
    "apply_crossover",
    "make_trials",
]

# strategy -> number of plain random donors it consumes
_DONORS = {
    "rand/1": 3,
    "best/1": 2,
    "current-to-best/1": 2,
    "current-to-rand/1": 3,
    "rand/2": 5,
    "current-to-best/2": 4,
    "best/2": 4,
    "current-to-pbest/1": 2,
}

MUTATION_KINDS = tuple(_DONORS)
_PBEST_KINDS = ("current-to-pbest/1",)


@dataclass
class StrategySpec:
    """Mutation strategy plus its control parameters.

    ``crossover`` is one of binomial/exponential/none; current-to-rand/1
    embeds its own recombination through K and is forced to none.
    """

    kind: str = "rand/1"
    f: float = 0.5
    cr: float = 0.5
    crossover: str = "binomial"
    p: float = 0.1
    use_archive: bool = False

    def __post_init__(self):
        if self.kind not in _DONORS:
            raise ConfigurationError(f"unknown mutation strategy {self.kind!r}")
        if not np.isfinite(self.f):
            raise ConfigurationError("scaling factor F must be finite")
        if not 0.0 <= self.cr <= 1.0:
            raise ConfigurationError("crossover rate CR must lie in [0, 1]")
        if not 0.0 < self.p <= 1.0:
            raise ConfigurationError("p-best fraction must lie in (0, 1]")
        if self.kind == "current-to-rand/1":
            self.crossover = "none"
        elif self.crossover not in ("binomial", "exponential", "none"):
            raise ConfigurationError(f"unknown crossover {self.crossover!r}")

    @property
    def min_population(self) -> int:
        return _DONORS[self.kind] + 1


@dataclass
class DonorDraw:
    """Donor indices for one mutant (distinct, excluding the target) and the
    per-mutant recombination weight K when the strategy needs one."""

    indices: np.ndarray
    k: float | None = None


def donor_count(kind: str) -> int:
    return _DONORS[kind]


def draw_donors(n_pop: int, i: int, count: int, rng) -> DonorDraw:
    """Draw ``count`` mutually distinct indices from [0, n_pop), all != i.

    Consumes one choice draw of ``count`` values from [0, n_pop - 1).
    """
    if n_pop < count + 1:
        raise ConfigurationError(
            f"population of {n_pop} cannot supply {count} donors distinct from "
            "the target")
    idx = np.asarray(rng.choice(n_pop - 1, size=count, replace=False))
    idx = idx + (idx >= i)
    return DonorDraw(indices=idx)


def donor_matrix(n_pop: int, count: int, exclude, rng) -> np.ndarray:
    """Batched donor draw: one row of ``count`` distinct indices per entry of
    ``exclude``, never colliding with that entry. Uniform over distinct
    tuples; consumes ``count`` integer blocks from ``rng``.
    """
    exclude = np.asarray(exclude)
    m = exclude.size
    if n_pop < count + 1:
        raise ConfigurationError(
            f"population of {n_pop} cannot supply {count} donors distinct from "
            "the target")
    out = np.empty((m, count), dtype=np.int64)
    for j in range(count):
        c = rng.integers(0, n_pop - 1 - j, size=m)
        if j:
            taken = np.sort(out[:, :j], axis=1)
            for p in range(j):
                c = c + (c >= taken[:, p])
        out[:, j] = c
    out += out >= exclude[:, None]
    return out


def _extended_donor(n_pop: int, n_archive: int, exclude_a, exclude_b, rng):
    """One index per row over population plus archive, avoiding two indices
    (both below n_pop). Indices >= n_pop refer to archive slots."""
    total = n_pop + n_archive
    lo = np.minimum(exclude_a, exclude_b)
    hi = np.maximum(exclude_a, exclude_b)
    size = None if np.ndim(exclude_a) == 0 else np.size(exclude_a)
    c = rng.integers(0, total - 2, size=size)
    c = c + (c >= lo)
    c = c + (c >= hi)
    return c


def _pbest_pool_size(p: float, n_pop: int) -> int:
    return max(1, int(np.ceil(p * n_pop)))


def mutate(pop, i: int, spec: StrategySpec, rng, draw: DonorDraw | None = None,
           sorted_indices=None) -> np.ndarray:
    """Build the mutant vector for member ``i`` from generation-start data.

    ``draw`` can inject precomputed donors (and K); otherwise they are drawn
    from ``rng``. ``sorted_indices`` caches ``pop.sorted_indices()`` for the
    best/p-best kinds. The mutant is not bound-repaired.
    """
    x = pop.x
    n = len(pop)
    kind = spec.kind
    f = spec.f

    pbest_row = None
    if kind in _PBEST_KINDS:
        order = pop.sorted_indices() if sorted_indices is None else sorted_indices
        pool = _pbest_pool_size(spec.p, n)
        pbest_row = x[order[int(rng.integers(pool))]]

    if draw is None:
        if kind == "current-to-pbest/1" and spec.use_archive and pop.archive:
            first = draw_donors(n, i, 1, rng)
            r2 = int(_extended_donor(n, len(pop.archive), np.int64(i),
                                     first.indices[0], rng))
            draw = DonorDraw(indices=np.array([first.indices[0], r2]))
        else:
            draw = draw_donors(n, i, _DONORS[kind], rng)
    r = draw.indices

    if kind == "rand/1":
        return x[r[0]] + f * (x[r[1]] - x[r[2]])
    if kind == "rand/2":
        return x[r[0]] + f * (x[r[1]] - x[r[2]]) + f * (x[r[3]] - x[r[4]])
    if kind in ("best/1", "best/2", "current-to-best/1", "current-to-best/2"):
        best = x[pop.best_index if sorted_indices is None else sorted_indices[0]]
        if kind == "best/1":
            return best + f * (x[r[0]] - x[r[1]])
        if kind == "best/2":
            return best + f * (x[r[0]] - x[r[1]]) + f * (x[r[2]] - x[r[3]])
        if kind == "current-to-best/1":
            return x[i] + f * (best - x[i]) + f * (x[r[0]] - x[r[1]])
        return (x[i] + f * (best - x[i]) + f * (x[r[0]] - x[r[1]])
                + f * (x[r[2]] - x[r[3]]))
    if kind == "current-to-rand/1":
        k = draw.k if draw.k is not None else float(rng.random())
        return x[i] + k * (x[r[0]] - x[i]) + f * (x[r[1]] - x[r[2]])
    # current-to-pbest/1
    second = x[r[1]] if r[1] < n else pop.archive[r[1] - n]
    return x[i] + f * (pbest_row - x[i]) + f * (x[r[0]] - second)


def binomial_mask(u, j_rand, cr: float):
    """Inheritance mask of the binomial crossover: strict u < cr, with the
    j_rand component always forced. Works on one vector or an (N, D) block
    with per-row j_rand."""
    mask = u < cr
    if mask.ndim == 1:
        mask[j_rand] = True
    else:
        mask[np.arange(mask.shape[0]), j_rand] = True
    return mask


def crossover_binomial(target, mutant, cr: float, rng) -> np.ndarray:
    """Component-wise mix of mutant and target; at least one mutant
    component is always inherited. Draws j_rand, then one uniform per
    component."""
    d = len(target)
    j_rand = int(rng.integers(d))
    u = rng.random(d)
    return np.where(binomial_mask(u, j_rand, cr), mutant, target)


def exponential_segment(cr: float, d: int, rng):
    """Start position and length of the exponential crossover segment.

    The length follows the classic do-while rule: extend while a fresh
    uniform stays below cr and the segment is shorter than D, so
    P(L = l) = cr^(l-1) (1 - cr) for l < D and cr^(D-1) at l = D.
    """
    n = int(rng.integers(d))
    length = 0
    while True:
        length += 1
        if not (rng.random() < cr and length < d):
            break
    return n, length


def crossover_exponential(target, mutant, cr: float, rng) -> np.ndarray:
    """Copy a circular segment of the mutant onto the target."""
    d = len(target)
    n, length = exponential_segment(cr, d, rng)
    trial = np.array(target, dtype=float, copy=True)
    pos = (n + np.arange(length)) % d
    trial[pos] = np.asarray(mutant)[pos]
    return trial


def apply_crossover(target, mutant, spec: StrategySpec, rng) -> np.ndarray:
    """Dispatch to the strategy's crossover; 'none' passes the mutant through."""
    if spec.crossover == "binomial":
        return crossover_binomial(target, mutant, spec.cr, rng)
    if spec.crossover == "exponential":
        return crossover_exponential(target, mutant, spec.cr, rng)
    return np.asarray(mutant, dtype=float)


def make_trials(pop, rows, spec: StrategySpec, rng, sorted_indices=None) -> np.ndarray:
    """Batched trial generation for the given target rows.

    Produces one un-repaired trial per row using the strategy's mutation
    followed by its crossover. This is the engine path; it is numerically
    identical to composing ``mutate`` with the crossover functions row by
    row, but consumes the random stream in generation-sized blocks.
    """
    x = pop.x
    n = len(pop)
    rows = np.asarray(rows, dtype=np.int64)
    m = rows.size
    kind = spec.kind
    f = spec.f
    if n < spec.min_population:
        raise ConfigurationError(
            f"{kind} needs a population of at least {spec.min_population}")
    order = pop.sorted_indices() if sorted_indices is None else sorted_indices

    if kind == "current-to-pbest/1" and spec.use_archive and pop.archive:
        r1 = donor_matrix(n, 1, rows, rng)[:, 0]
        r2 = _extended_donor(n, len(pop.archive), rows, r1, rng)
        donors = np.stack([r1, r2], axis=1)
    else:
        donors = donor_matrix(n, _DONORS[kind], rows, rng)

    if kind == "rand/1":
        v = x[donors[:, 0]] + f * (x[donors[:, 1]] - x[donors[:, 2]])
    elif kind == "rand/2":
        v = (x[donors[:, 0]] + f * (x[donors[:, 1]] - x[donors[:, 2]])
             + f * (x[donors[:, 3]] - x[donors[:, 4]]))
    elif kind == "best/1":
        v = x[order[0]] + f * (x[donors[:, 0]] - x[donors[:, 1]])
    elif kind == "best/2":
        v = (x[order[0]] + f * (x[donors[:, 0]] - x[donors[:, 1]])
             + f * (x[donors[:, 2]] - x[donors[:, 3]]))
    elif kind == "current-to-best/1":
        xi = x[rows]
        v = xi + f * (x[order[0]] - xi) + f * (x[donors[:, 0]] - x[donors[:, 1]])
    elif kind == "current-to-best/2":
        xi = x[rows]
        v = (xi + f * (x[order[0]] - xi) + f * (x[donors[:, 0]] - x[donors[:, 1]])
             + f * (x[donors[:, 2]] - x[donors[:, 3]]))
    elif kind == "current-to-pbest/1":
        pool = _pbest_pool_size(spec.p, n)
        pbest = x[order[rng.integers(0, pool, size=m)]]
        xi = x[rows]
        r2 = donors[:, 1]
        if spec.use_archive and pop.archive:
            stack = np.vstack([x] + pop.archive)
            second = stack[r2]
        else:
            second = x[r2]
        v = xi + f * (pbest - xi) + f * (x[donors[:, 0]] - second)
    else:  # current-to-rand/1
        k = rng.random(m)[:, None]
        xi = x[rows]
        v = xi + k * (x[donors[:, 0]] - xi) + f * (x[donors[:, 1]] - x[donors[:, 2]])

    if spec.crossover == "none":
        return v
    if spec.crossover == "binomial":
        j_rand = rng.integers(0, pop.dimension, size=m)
        u = rng.random((m, pop.dimension))
        return np.where(binomial_mask(u, j_rand, spec.cr), v, x[rows])
    trials = np.empty_like(v)
    for row in range(m):
        trials[row] = crossover_exponential(x[rows[row]], v[row], spec.cr, rng)
    return trials
