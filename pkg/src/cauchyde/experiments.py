"""Experiment harness: configuration, seeded batch runs, result archives.

A configuration spans algorithms x functions x dimensions x runs. Every
run's generator seed is derived from the master seed and the cell
coordinates through a stable hash, so adding algorithms or functions never
perturbs existing cells and re-running a configuration reproduces the
archive byte for byte (wall-clock timings live in their own file and are
exempt). Presets cover the standard comparison grids at desk scale:
conventional and adaptive variants with and without the Cauchy rescues,
the four threshold schedules, and the initial-threshold sweep.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .adaptive import EPSDE, SHADE, CoDE, JADE, SaDE
from .bench import get_objective
from .cauchy import DE, AcmConfig, CmConfig, ScheduleSpec
from .core import Budget, ConfigurationError
from .driver import RunRecord, run
from .ensemble import EDEV, MPEDE
from .stats import PairedSample, build_comparison_table, wilcoxon_signed_rank
from .strategies import StrategySpec

__all__ = [
    "ExperimentConfig",
    "ExperimentArchive",
    "build_algorithm",
    "derive_seed",
    "run_experiment",
    "trace_quantiles",
    "PRESETS",
    "preset",
]


def _build_cauchy(spec):
    if spec is None:
        return None
    mode = spec.get("mode", "none")
    if mode == "none":
        return None
    if mode == "cm":
        return CmConfig(ft=float(spec.get("ft", 5.0)),
                        gamma=float(spec.get("gamma", 0.1)))
    if mode == "acm":
        sched = spec.get("schedule", {})
        schedule = ScheduleSpec(
            family=sched.get("family", "SFTD"),
            ft_init=float(sched.get("ft_init", 100.0)),
            ft_fin=(None if sched.get("ft_fin") is None
                    else float(sched.get("ft_fin"))),
            lb=float(sched.get("lb", -6.0)),
            ub=float(sched.get("ub", 6.0)))
        return AcmConfig(schedule=schedule, p=float(spec.get("p", 0.1)),
                         gamma=float(spec.get("gamma", 0.1)),
                         cr_choices=tuple(spec.get("cr_choices", (0.1, 0.9))))
    raise ConfigurationError(f"unknown cauchy mode {mode!r}")


def build_algorithm(spec: dict):
    """Fresh stepper instance from an algorithm description dict."""
    kind = spec.get("kind", "de")
    cauchy = _build_cauchy(spec.get("cauchy"))
    if kind == "de":
        strategy = StrategySpec(
            kind=spec.get("strategy", "rand/1"),
            f=float(spec.get("f", 0.5)),
            cr=float(spec.get("cr", 0.5)),
            crossover=spec.get("crossover", "binomial"),
            p=float(spec.get("p", 0.1)),
            use_archive=bool(spec.get("use_archive", False)))
        return DE(strategy, cauchy=cauchy)
    if kind == "sade":
        return SaDE(lp=int(spec.get("lp", 50)), cauchy=cauchy)
    if kind == "epsde":
        return EPSDE(cauchy=cauchy)
    if kind == "code":
        return CoDE(cauchy=cauchy)
    if kind == "jade":
        return JADE(p=float(spec.get("p", 0.1)), c=float(spec.get("c", 0.1)),
                    cauchy=cauchy)
    if kind == "shade":
        return SHADE(p=float(spec.get("p", 0.1)), h=spec.get("h"), cauchy=cauchy)
    if kind == "mpede":
        return MPEDE(lp=int(spec.get("lp", 20)), cauchy=cauchy)
    if kind == "edev":
        return EDEV(lp=int(spec.get("lp", 50)), cauchy=cauchy)
    raise ConfigurationError(f"unknown algorithm kind {kind!r}")


def derive_seed(master: int, algorithm_id: str, function: str, dimension: int,
                run_index: int) -> np.random.SeedSequence:
    """Stable per-cell seed: a hash of the cell coordinates mixed with the
    master seed. Independent of insertion order and of other cells."""
    key = f"{algorithm_id}|{function}|{dimension}|{run_index}".encode()
    digest = hashlib.sha256(key).digest()
    words = np.frombuffer(digest[:16], dtype=np.uint32)
    return np.random.SeedSequence([int(master)] + [int(w) for w in words])


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce an experiment."""

    algorithms: list
    functions: list
    dimensions: list = field(default_factory=lambda: [30])
    runs: int = 51
    np_size: int = 100
    nfe_max: int | None = None
    nfe_per_dim: int | None = 10000
    g_max: int | None = None
    seed: int = 0
    trace_interval: int | None = None
    reference: str | None = None
    out: str | None = None
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        budget = data.pop("budget", None)
        known = set(cls.__dataclass_fields__)
        cfg = {}
        for key, value in data.items():
            name = {"np": "np_size"}.get(key, key)
            if name not in known:
                raise ConfigurationError(f"unknown configuration key {key!r}")
            cfg[name] = value
        if budget is not None:
            # an explicit budget section fully replaces the defaults
            for key in ("nfe_max", "nfe_per_dim", "g_max"):
                cfg[key] = budget.get(key)
        return cls(**cfg)

    @classmethod
    def from_yaml(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(yaml.safe_load(fh))

    def to_dict(self) -> dict:
        return {
            "algorithms": self.algorithms,
            "functions": list(self.functions),
            "dimensions": list(self.dimensions),
            "runs": self.runs,
            "np": self.np_size,
            "budget": {"nfe_max": self.nfe_max, "nfe_per_dim": self.nfe_per_dim,
                       "g_max": self.g_max},
            "seed": self.seed,
            "trace_interval": self.trace_interval,
            "reference": self.reference,
            "out": self.out,
            "workers": self.workers,
        }

    def algorithm_ids(self) -> list:
        return [a["id"] for a in self.algorithms]

    def budget_for(self, dimension: int) -> Budget:
        nfe = self.nfe_max
        if nfe is None and self.nfe_per_dim is not None:
            nfe = int(self.nfe_per_dim) * dimension
        return Budget(g_max=self.g_max, nfe_max=nfe)

    def validate(self) -> None:
        if not self.algorithms:
            raise ConfigurationError("no algorithms configured")
        ids = []
        for spec in self.algorithms:
            if "id" not in spec:
                raise ConfigurationError("every algorithm needs an 'id'")
            ids.append(spec["id"])
            build_algorithm(spec)  # raises on unknown kinds or bad parameters
        if len(set(ids)) != len(ids):
            raise ConfigurationError("algorithm ids must be unique")
        if self.reference is not None and self.reference not in ids:
            raise ConfigurationError(f"reference {self.reference!r} is not a "
                                     "configured algorithm")
        if not self.functions:
            raise ConfigurationError("no objective functions configured")
        for name in self.functions:
            for dim in self.dimensions:
                get_objective(name, dim)  # raises on unknown names
        if self.runs < 1:
            raise ConfigurationError("runs must be at least 1")
        if self.np_size < 4:
            raise ConfigurationError("population size must be at least 4")
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")
        for dim in self.dimensions:
            self.budget_for(dim)  # raises when no budget resolves


def _seed_label(master, alg_id, function, dim, run_index):
    return f"{alg_id}|{function}|D{dim}|run{run_index}|master{master}"


def _run_cell(payload):
    (alg_spec, function, dim, run_index, master, np_size, budget_fields,
     trace_interval) = payload
    objective = get_objective(function, dim)
    algorithm = build_algorithm(alg_spec)
    budget = Budget(**budget_fields)
    rng = np.random.default_rng(
        derive_seed(master, alg_spec["id"], function, dim, run_index))
    record = run(algorithm, objective, np_size=np_size, budget=budget,
                 rng=rng, trace_interval=trace_interval)
    record.seed = _seed_label(master, alg_spec["id"], function, dim, run_index)
    return (alg_spec["id"], function, dim, run_index), record


def _fmt(x) -> str:
    return repr(float(x))


@dataclass
class ExperimentArchive:
    """All run records of one experiment plus the derived tables."""

    config: ExperimentConfig
    records: dict  # (algorithm id, function, dimension) -> list[RunRecord]

    def finals(self, algorithm_id: str, function: str, dimension: int) -> np.ndarray:
        return np.array([r.final_fev
                         for r in self.records[(algorithm_id, function, dimension)]])

    @property
    def reference(self) -> str:
        return self.config.reference or self.config.algorithm_ids()[0]

    def summary_rows(self) -> list:
        rows = []
        ref = self.reference
        symbol = {"plus": "+", "equals": "=", "minus": "-"}
        for alg in self.config.algorithm_ids():
            for function in self.config.functions:
                for dim in self.config.dimensions:
                    fevs = self.finals(alg, function, dim)
                    verdict = ""
                    if alg != ref and self.config.runs >= 5:
                        sample = PairedSample(self.finals(ref, function, dim), fevs)
                        verdict = symbol[wilcoxon_signed_rank(sample).verdict]
                    rows.append({
                        "algorithm": alg, "function": function, "dimension": dim,
                        "mean": float(np.mean(fevs)), "std": float(np.std(fevs)),
                        "median": float(np.median(fevs)), "verdict": verdict,
                    })
        return rows

    def summary_csv(self) -> str:
        lines = ["algorithm,function,dimension,mean,std,median,verdict"]
        for row in self.summary_rows():
            lines.append(
                f"{row['algorithm']},{row['function']},{row['dimension']},"
                f"{_fmt(row['mean'])},{_fmt(row['std'])},{_fmt(row['median'])},"
                f"{row['verdict']}")
        return "\n".join(lines) + "\n"

    def comparison_table(self):
        ref = self.reference
        cells = {}
        for alg in self.config.algorithm_ids():
            if alg == ref:
                continue
            for function in self.config.functions:
                for dim in self.config.dimensions:
                    cells[(alg, f"{function}/D{dim}")] = PairedSample(
                        self.finals(ref, function, dim),
                        self.finals(alg, function, dim))
        return build_comparison_table(cells, baseline=ref)

    def finals_csv(self) -> str:
        lines = ["algorithm,function,dimension,run,seed,final_fev,nfe,generations"]
        for (alg, function, dim), records in sorted(self.records.items()):
            for i, record in enumerate(records):
                lines.append(f"{alg},{function},{dim},{i},{record.seed},"
                             f"{_fmt(record.final_fev)},{record.nfe_used},"
                             f"{record.generations}")
        return "\n".join(lines) + "\n"

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.yaml").write_text(
            yaml.safe_dump(self.config.to_dict(), sort_keys=False))
        (out / "summary.csv").write_text(self.summary_csv())
        (out / "finals.csv").write_text(self.finals_csv())
        timing = ["algorithm,function,dimension,run,wall_time"]
        for (alg, function, dim), records in sorted(self.records.items()):
            for i, record in enumerate(records):
                timing.append(f"{alg},{function},{dim},{i},{record.wall_time:.3f}")
        (out / "timings.csv").write_text("\n".join(timing) + "\n")
        if len(self.config.algorithm_ids()) > 1 and self.config.runs >= 5:
            table = self.comparison_table()
            (out / "table.txt").write_text(table.to_text())
            (out / "table.csv").write_text(table.to_csv())
        traces = out / "traces"
        traces.mkdir(exist_ok=True)
        for (alg, function, dim), records in sorted(self.records.items()):
            safe = alg.replace("/", "-")
            for i, record in enumerate(records):
                lines = ["nfe,fev"]
                lines += [f"{nfe},{_fmt(fev)}" for nfe, fev in record.trace]
                (traces / f"trace_{safe}__{function}__D{dim}__r{i}.csv"
                 ).write_text("\n".join(lines) + "\n")
        return out


def run_experiment(config: ExperimentConfig, out_dir=None) -> ExperimentArchive:
    """Execute every (algorithm, function, dimension, run) cell.

    Cells are independent and fully seeded, so any worker count yields the
    same archive. Files are written when the config (or ``out_dir``) names
    an output directory.
    """
    config.validate()
    payloads = []
    for alg_spec in config.algorithms:
        for function in config.functions:
            for dim in config.dimensions:
                budget = config.budget_for(dim)
                for run_index in range(config.runs):
                    payloads.append((
                        alg_spec, function, dim, run_index, config.seed,
                        config.np_size,
                        {"g_max": budget.g_max, "nfe_max": budget.nfe_max},
                        config.trace_interval))
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_cell, payloads, chunksize=1))
    else:
        results = [_run_cell(p) for p in payloads]

    records = {}
    for (alg, function, dim, run_index), record in results:
        records.setdefault((alg, function, dim),
                           [None] * config.runs)[run_index] = record
    archive = ExperimentArchive(config=config, records=records)
    target = out_dir or config.out
    if target:
        archive.write(target)
    return archive


def trace_quantiles(records) -> np.ndarray:
    """25th/50th/75th percentile curves over aligned traces.

    Returns an array with columns (nfe, q25, median, q75). Percentiles use
    linear interpolation between order statistics. Traces must share one
    sampling grid.
    """
    records = list(records)
    if not records:
        raise ValueError("no run records given")
    grids = [np.array([point[0] for point in r.trace]) for r in records]
    for grid in grids[1:]:
        if grid.shape != grids[0].shape or not np.array_equal(grid, grids[0]):
            raise ValueError("trace grids are not aligned")
    values = np.array([[point[1] for point in r.trace] for r in records])
    q25, q50, q75 = np.percentile(values, [25, 50, 75], axis=0)
    return np.column_stack([grids[0], q25, q50, q75])


# ---------------------------------------------------------------------------
# Presets: the standard comparison grids at desk scale.

_CONVENTIONAL = (
    ("rand1", "rand/1", "binomial"),
    ("best1", "best/1", "binomial"),
    ("ctb1", "current-to-best/1", "binomial"),
    ("ctr1", "current-to-rand/1", "none"),
    ("rand2", "rand/2", "binomial"),
    ("ctb2", "current-to-best/2", "binomial"),
)

_ADVANCED = ("sade", "epsde", "code", "shade", "mpede", "edev")

_ACM = {"mode": "acm", "schedule": {"family": "SFTD", "ft_init": 100, "ft_fin": 5}}
_CM = {"mode": "cm", "ft": 5}


def _desk(algorithms, *, dimensions=(10,), runs=11, seed=2017, reference=None):
    return {
        "algorithms": algorithms,
        "functions": ["sphere", "rosenbrock", "schwefel_1_2", "rastrigin",
                      "ackley", "griewank", "schaffer_f6"],
        "dimensions": list(dimensions),
        "runs": runs,
        "np": 100,
        "budget": {"nfe_per_dim": 10000},
        "seed": seed,
        "reference": reference,
    }


def _conventional_grid(dimensions):
    algorithms = []
    for tag, strategy, crossover in _CONVENTIONAL:
        base = {"kind": "de", "strategy": strategy, "crossover": crossover,
                "f": 0.5, "cr": 0.5}
        algorithms.append({"id": f"acm-{tag}", **base, "cauchy": _ACM})
        algorithms.append({"id": f"cm-{tag}", **base, "cauchy": _CM})
        algorithms.append({"id": tag, **base})
    return _desk(algorithms, dimensions=dimensions, reference="acm-rand1")


def _advanced_grid(dimensions):
    algorithms = []
    for kind in _ADVANCED:
        algorithms.append({"id": f"acm-{kind}", "kind": kind, "cauchy": _ACM})
        algorithms.append({"id": f"cm-{kind}", "kind": kind, "cauchy": _CM})
        algorithms.append({"id": kind, "kind": kind})
    return _desk(algorithms, dimensions=dimensions, reference="acm-sade")


def _schedule_grid(kind):
    schedules = (("sftd", "SFTD", 100, 5), ("sfti", "SFTI", 5, 100),
                 ("lftd", "LFTD", 100, 5), ("lfti", "LFTI", 5, 100))
    algorithms = []
    for tag, family, ft_init, ft_fin in schedules:
        cauchy = {"mode": "acm", "schedule": {"family": family,
                                              "ft_init": ft_init,
                                              "ft_fin": ft_fin}}
        spec = {"id": f"{tag}", "cauchy": cauchy}
        if kind == "de":
            spec.update({"kind": "de", "strategy": "rand/1", "f": 0.5, "cr": 0.5})
        else:
            spec.update({"kind": kind})
        algorithms.append(spec)
    return _desk(algorithms, reference="sftd")


def _ft_init_grid(kind):
    algorithms = []
    for ft_init in (100, 30, 50, 80, 130, 150, 180):
        cauchy = {"mode": "acm", "schedule": {"family": "SFTD",
                                              "ft_init": ft_init, "ft_fin": 5}}
        spec = {"id": f"ft{ft_init}", "cauchy": cauchy}
        if kind == "de":
            spec.update({"kind": "de", "strategy": "rand/1", "f": 0.5, "cr": 0.5})
        else:
            spec.update({"kind": kind})
        algorithms.append(spec)
    return _desk(algorithms, reference="ft100")


PRESETS = {
    "table1": lambda: _conventional_grid((10,)),
    "table2": lambda: _conventional_grid((30,)),
    "table3": lambda: _advanced_grid((10,)),
    "table4": lambda: _advanced_grid((30,)),
    "table5": lambda: _schedule_grid("de"),
    "table6": lambda: _schedule_grid("edev"),
    "table7": lambda: _ft_init_grid("de"),
    "table8": lambda: _ft_init_grid("edev"),
}


def preset(name: str, **overrides) -> ExperimentConfig:
    """Named preset configuration with optional field overrides."""
    try:
        data = PRESETS[name]()
    except KeyError:
        raise ConfigurationError(
            f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}"
        ) from None
    data.update(overrides)
    return ExperimentConfig.from_dict(data)
