"""Wilcoxon signed-rank comparisons and plus/equals/minus summary tables.

Conventions: samples hold final function error values of paired seeded runs
(minimization, lower is better). Zero differences are discarded before
ranking. The two-sided p-value is exact (full sign enumeration) up to 12
effective pairs and a tie-corrected normal approximation with continuity
correction beyond that. A comparison verdict is 'plus' when the first
sample is significantly better, 'minus' when significantly worse, and
'equals' otherwise; direction is read from the medians.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm, rankdata

__all__ = [
    "PairedSample",
    "ComparisonCell",
    "wilcoxon_signed_rank",
    "build_comparison_table",
    "ComparisonTable",
    "EXACT_LIMIT",
]

EXACT_LIMIT = 12


@dataclass
class PairedSample:
    """Final error values of two algorithms over the same seeded runs."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        if self.a.shape != self.b.shape or self.a.ndim != 1:
            raise ValueError("paired samples must be equal-length 1-D vectors")
        if self.a.size < 5:
            raise ValueError("need at least 5 paired runs")


@dataclass
class ComparisonCell:
    """One comparison outcome: verdict, p-value, and the W+ statistic."""

    verdict: str
    p_value: float
    statistic: float
    method: str = "exact"


def _exact_two_sided(ranks: np.ndarray, w_plus: float) -> float:
    """Enumerate W+ over all sign assignments of the observed ranks.

    Ties leave average (possibly half-integer) ranks, so the distribution
    is built on the observed rank multiset rather than 1..n.
    """
    n = ranks.size
    total = 1 << n
    w_all = np.zeros(total)
    for j in range(n):
        positive = ((np.arange(total) >> j) & 1).astype(bool)
        w_all[positive] += ranks[j]
    le = int(np.sum(w_all <= w_plus + 1e-12))
    ge = int(np.sum(w_all >= w_plus - 1e-12))
    return min(1.0, 2.0 * min(le, ge) / total)


def _normal_two_sided(ranks: np.ndarray, w_plus: float) -> float:
    n = ranks.size
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, counts = np.unique(ranks, return_counts=True)
    var -= np.sum(counts**3 - counts) / 48.0
    if var <= 0:
        return 1.0
    dev = w_plus - mean
    # continuity correction of one half toward the mean
    dev = np.sign(dev) * max(0.0, abs(dev) - 0.5)
    z = dev / np.sqrt(var)
    return min(1.0, float(2.0 * norm.sf(abs(z))))


def wilcoxon_signed_rank(sample: PairedSample, alpha: float = 0.05,
                         method: str = "auto") -> ComparisonCell:
    """Two-sided signed-rank comparison of sample.a against sample.b.

    ``method`` is 'auto' (exact up to 12 effective pairs), 'exact', or
    'approx'. All-zero differences give an 'equals' verdict with p = 1.
    """
    d = sample.a - sample.b
    nz = d[d != 0.0]
    if nz.size == 0:
        return ComparisonCell("equals", 1.0, 0.0, method="exact")
    ranks = rankdata(np.abs(nz))
    w_plus = float(np.sum(ranks[nz > 0]))
    if method == "auto":
        method = "exact" if nz.size <= EXACT_LIMIT else "approx"
    if method == "exact":
        p = _exact_two_sided(ranks, w_plus)
    elif method == "approx":
        p = _normal_two_sided(ranks, w_plus)
    else:
        raise ValueError(f"unknown method {method!r}")

    verdict = "equals"
    if p < alpha:
        med_a, med_b = np.median(sample.a), np.median(sample.b)
        if med_a < med_b:
            verdict = "plus"
        elif med_a > med_b:
            verdict = "minus"
    return ComparisonCell(verdict, float(p), w_plus, method=method)


_SYMBOL = {"plus": "+", "equals": "=", "minus": "-"}


@dataclass
class ComparisonTable:
    """Per-function comparison of one baseline algorithm against rivals."""

    baseline: str
    rivals: list
    functions: list
    rows: dict          # function -> {"baseline": (mean, std), rival: (mean, std, cell) | None}
    tallies: dict       # rival -> (plus, equals, minus)
    alpha: float = 0.05

    def tally_string(self, rival: str) -> str:
        return "/".join(str(c) for c in self.tallies[rival])

    def to_csv(self) -> str:
        lines = ["function,algorithm,mean,std,p_value,verdict"]
        for fn in self.functions:
            row = self.rows[fn]
            mean, std = row["baseline"]
            lines.append(f"{fn},{self.baseline},{mean!r},{std!r},,")
            for rival in self.rivals:
                entry = row.get(rival)
                if entry is None:
                    lines.append(f"{fn},{rival},,,,absent")
                    continue
                mean, std, cell = entry
                lines.append(f"{fn},{rival},{mean!r},{std!r},{cell.p_value!r},"
                             f"{_SYMBOL[cell.verdict]}")
        for rival in self.rivals:
            lines.append(f"+/=/-,{rival},,,,{self.tally_string(rival)}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        width = 24
        head = ["function".ljust(12), self.baseline.rjust(width)]
        head += [r.rjust(width) for r in self.rivals]
        lines = ["".join(head)]
        best_mark = "*"
        for fn in self.functions:
            row = self.rows[fn]
            means = [row["baseline"][0]]
            means += [row[r][0] if row.get(r) else np.inf for r in self.rivals]
            best = int(np.argmin(means))
            cells = [f"{row['baseline'][0]:.4e} ({row['baseline'][1]:.2e})"]
            for rival in self.rivals:
                entry = row.get(rival)
                if entry is None:
                    cells.append("absent")
                    continue
                mean, std, cell = entry
                cells.append(f"{mean:.4e} ({std:.2e}) {_SYMBOL[cell.verdict]}")
            cells = [(best_mark if j == best else " ") + c
                     for j, c in enumerate(cells)]
            lines.append("".join([fn.ljust(12)] + [c.rjust(width) for c in cells]))
        tally = ["+/=/-".ljust(12), "".rjust(width)]
        tally += [self.tally_string(r).rjust(width) for r in self.rivals]
        lines.append("".join(tally))
        lines.append(f"signed-rank test at alpha={self.alpha}; + means "
                     f"{self.baseline} is significantly better, - worse; "
                     f"exact p up to {EXACT_LIMIT} effective pairs, normal "
                     "approximation beyond; * marks the best mean")
        return "\n".join(lines) + "\n"


def build_comparison_table(cells: dict, baseline: str = "baseline",
                           alpha: float = 0.05, method: str = "auto") -> ComparisonTable:
    """Assemble the verdict table from paired samples.

    ``cells`` maps (rival, function) to a PairedSample whose ``a`` side is
    the baseline algorithm. Missing cells are reported as absent and
    excluded from the rival's tally.
    """
    rivals = sorted({rival for rival, _ in cells})
    functions = sorted({fn for _, fn in cells})
    slot = {"plus": 0, "equals": 1, "minus": 2}
    rows = {}
    tallies = {rival: [0, 0, 0] for rival in rivals}
    for fn in functions:
        row = {}
        base_sample = None
        for rival in rivals:
            sample = cells.get((rival, fn))
            if sample is None:
                row[rival] = None
                continue
            base_sample = sample
            cell = wilcoxon_signed_rank(sample, alpha=alpha, method=method)
            row[rival] = (float(np.mean(sample.b)), float(np.std(sample.b)), cell)
            tallies[rival][slot[cell.verdict]] += 1
        if base_sample is None:
            raise ValueError(f"no sample provides baseline data for {fn}")
        row["baseline"] = (float(np.mean(base_sample.a)),
                           float(np.std(base_sample.a)))
        rows[fn] = row
    return ComparisonTable(baseline=baseline, rivals=rivals, functions=functions,
                           rows=rows, tallies={r: tuple(t) for r, t in tallies.items()},
                           alpha=alpha)
