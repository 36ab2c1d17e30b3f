"""From paired run results to a plus/equals/minus comparison table.

The signed-rank comparison is exact (full sign enumeration) up to twelve
effective pairs and a tie-corrected normal approximation beyond. A 'plus'
means the baseline algorithm is significantly better at alpha = 0.05 under
minimization; the table footer tallies verdicts per rival.
"""

import numpy as np

from cauchyde import PairedSample, build_comparison_table, wilcoxon_signed_rank

rng = np.random.default_rng(3)

print("small hand-checkable cases:")
a = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
cell = wilcoxon_signed_rank(PairedSample(a, a + 1.0))
print(f"  six one-sided pairs: p = {cell.p_value} -> {cell.verdict} "
      f"(exact enumeration: 2/2^6)")
cell = wilcoxon_signed_rank(PairedSample(a[:5], a[:5] + 1.0))
print(f"  five one-sided pairs: p = {cell.p_value} -> {cell.verdict} "
      f"(not significant at 0.05)")

# fake an experiment: baseline clearly better on two functions, tied on
# one, and worse on one
def runs(center, spread=0.1, n=15):
    return center + spread * rng.standard_normal(n)

baseline = {"sphere": runs(1.0), "rastrigin": runs(20.0),
            "ackley": runs(3.0), "griewank": runs(0.5)}
rival = {"sphere": runs(2.0), "rastrigin": runs(35.0),
         "ackley": baseline["ackley"].copy(), "griewank": runs(0.1)}

cells = {("rival-de", fn): PairedSample(baseline[fn], rival[fn])
         for fn in baseline}
table = build_comparison_table(cells, baseline="our-de")
print("\n" + table.to_text())
print("machine-readable form:\n")
print(table.to_csv())
