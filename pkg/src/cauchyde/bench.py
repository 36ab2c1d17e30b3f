"""Benchmark objective functions and the function-error-value metric.

All built-in functions are vectorized over leading axes: they accept a
single point of shape (D,) or a block of shape (N, D). Every built-in has
a known optimum value of 0, so the function error value of a run equals
its best raw fitness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Bounds, ConfigurationError

__all__ = [
    "Objective",
    "fev",
    "get_objective",
    "suite",
    "list_functions",
    "load_cec_suite",
]


def fev(f_star: float, f_best: float) -> float:
    """Function error value: absolute gap between optimum and best found."""
    return abs(f_star - f_best)


@dataclass
class Objective:
    """A box-bounded minimization target with a known optimum."""

    name: str
    dimension: int
    bounds: Bounds
    fn: callable
    f_star: float = 0.0
    x_star: np.ndarray | None = None
    modality: str = "multimodal"

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(
                f"{self.name} expects a point of dimension {self.dimension}, "
                f"got shape {x.shape}")
        return float(self.fn(x))


def sphere(x):
    return np.sum(x * x, axis=-1)


def rosenbrock(x):
    a = x[..., :-1]
    b = x[..., 1:]
    return np.sum(100.0 * (b - a * a) ** 2 + (1.0 - a) ** 2, axis=-1)


def schwefel_1_2(x):
    # sum of squared prefix sums
    return np.sum(np.cumsum(x, axis=-1) ** 2, axis=-1)


def rastrigin(x):
    return np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0, axis=-1)


def ackley(x):
    d = x.shape[-1]
    q = np.sqrt(np.sum(x * x, axis=-1) / d)
    c = np.sum(np.cos(2.0 * np.pi * x), axis=-1) / d
    return -20.0 * np.exp(-0.2 * q) - np.exp(c) + 20.0 + np.e


def griewank(x):
    d = x.shape[-1]
    j = np.sqrt(np.arange(1, d + 1, dtype=float))
    return np.sum(x * x, axis=-1) / 4000.0 - np.prod(np.cos(x / j), axis=-1) + 1.0


def expanded_schaffer_f6(x):
    # pairwise Schaffer F6 over the cyclic chain (x1,x2), ..., (xD,x1)
    y = np.concatenate([x[..., 1:], x[..., :1]], axis=-1)
    s = x * x + y * y
    g = 0.5 + (np.sin(np.sqrt(s)) ** 2 - 0.5) / (1.0 + 0.001 * s) ** 2
    return np.sum(g, axis=-1)


# name -> (fn, lower, upper, modality, optimizer builder)
_SUITE = {
    "sphere": (sphere, -100.0, 100.0, "unimodal", np.zeros),
    "rosenbrock": (rosenbrock, -30.0, 30.0, "unimodal", np.ones),
    "schwefel_1_2": (schwefel_1_2, -100.0, 100.0, "unimodal", np.zeros),
    "rastrigin": (rastrigin, -5.12, 5.12, "multimodal", np.zeros),
    "ackley": (ackley, -32.768, 32.768, "multimodal", np.zeros),
    "griewank": (griewank, -600.0, 600.0, "multimodal", np.zeros),
    "schaffer_f6": (expanded_schaffer_f6, -100.0, 100.0, "multimodal", np.zeros),
}


def list_functions() -> list:
    return sorted(_SUITE)


def get_objective(name: str, dimension: int) -> Objective:
    try:
        fn, lo, hi, modality, x_star = _SUITE[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown objective {name!r}; known: {', '.join(list_functions())}"
        ) from None
    if dimension < 1:
        raise ConfigurationError("objective dimension must be positive")
    return Objective(name=name, dimension=dimension,
                     bounds=Bounds.cube(lo, hi, dimension), fn=fn,
                     f_star=0.0, x_star=x_star(dimension), modality=modality)


def suite(dimension: int) -> list:
    """All built-in objectives at the given dimension."""
    return [get_objective(name, dimension) for name in list_functions()]


def _shifted_rotated(base_fn, shift, rotation, offset):
    def fn(x):
        z = np.asarray(x, dtype=float) - shift
        if rotation is not None:
            z = z @ rotation.T
        return base_fn(z) + offset
    return fn


def load_cec_suite(directory, dimension: int | None = None) -> dict:
    """Register shifted/rotated objectives from a data directory.

    The directory holds one ``<id>_D<dim>_shift.txt`` per function, whose
    first line is a header comment::

        # base=<built-in name> f_star=<float> lower=<float> upper=<float>

    followed by D whitespace-separated shift components. An optional
    ``<id>_D<dim>_rot.txt`` holds a DxD rotation matrix. The objective is
    evaluated as base(M @ (x - shift)) + f_star, minimized at the shift.

    Returns a dict keyed by ``<id>_D<dim>``. A missing directory yields an
    empty dict so the built-in suite stands alone.
    """
    root = Path(directory)
    if not root.is_dir():
        return {}
    loaded = {}
    for shift_file in sorted(root.glob("*_shift.txt")):
        stem = shift_file.name[: -len("_shift.txt")]
        fid, _, dtag = stem.rpartition("_D")
        if not fid or not dtag.isdigit():
            raise ConfigurationError(f"bad file name {shift_file.name}; "
                                     "expected <id>_D<dim>_shift.txt")
        dim = int(dtag)
        if dimension is not None and dim != dimension:
            continue
        header, *rest = shift_file.read_text().splitlines()
        if not header.startswith("#"):
            raise ConfigurationError(f"{shift_file.name} is missing its header line")
        meta = dict(tok.split("=", 1) for tok in header.lstrip("# ").split())
        base = meta.get("base")
        if base not in _SUITE:
            raise ConfigurationError(f"{shift_file.name}: unknown base {base!r}")
        base_fn = _SUITE[base][0]
        f_star = float(meta.get("f_star", 0.0))
        lo = float(meta.get("lower", -100.0))
        hi = float(meta.get("upper", 100.0))
        shift = np.array(" ".join(rest).split(), dtype=float)
        if shift.size != dim:
            raise ConfigurationError(f"{shift_file.name}: expected {dim} shift "
                                     f"components, got {shift.size}")
        rot_file = root / f"{stem}_rot.txt"
        rotation = None
        if rot_file.exists():
            rotation = np.loadtxt(rot_file)
            if rotation.shape != (dim, dim):
                raise ConfigurationError(f"{rot_file.name}: expected a {dim}x{dim} matrix")
        loaded[stem] = Objective(
            name=stem, dimension=dim, bounds=Bounds.cube(lo, hi, dim),
            fn=_shifted_rotated(base_fn, shift, rotation, f_star),
            f_star=f_star, x_star=shift, modality=_SUITE[base][3])
    return loaded
