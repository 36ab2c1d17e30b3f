"""Plain DE versus the two Cauchy rescue operators on a multimodal surface.

The classic rescue (fixed threshold, best-centered) converges fast but can
drag the whole population into one basin. The scheduled p-best rescue
stays quiet while the population explores and becomes aggressive late,
which usually ends lower on Rastrigin-like landscapes.
"""

import numpy as np

from cauchyde import (DE, AcmConfig, Budget, CmConfig, ScheduleSpec,
                      StrategySpec, get_objective, run)

objective = get_objective("rastrigin", 20)
budget = Budget(nfe_max=100_000)
spec = StrategySpec("rand/1", f=0.5, cr=0.5)

contenders = {
    "plain DE/rand/1/bin": None,
    "fixed-threshold rescue (T=5)": CmConfig(ft=5.0),
    "scheduled p-best rescue (100 -> 5)": AcmConfig(
        schedule=ScheduleSpec("SFTD", 100.0, 5.0), p=0.1, gamma=0.1),
}

print(f"{objective.name} at D={objective.dimension}, "
      f"budget {budget.nfe_max} evaluations, 5 seeded runs each\n")
for name, cauchy in contenders.items():
    finals = [run(DE(spec, cauchy=cauchy), objective, np_size=100,
                  budget=budget, seed=1000 + k).final_fev for k in range(5)]
    finals = np.array(finals)
    print(f"{name:<36} median {np.median(finals):8.3f}   "
          f"runs {np.round(finals, 2)}")

print("""
the fixed-threshold rescue is greedy: great when one basin dominates,
risky otherwise. the scheduled rescue trades a slower start for a better
finish by perturbing around a random top-10% member instead of the single
best and by firing rarely until late in the run.
""")
