"""A quick bake-off of the adaptive DE variants, with and without rescue.

Each variant controls its own parameters: SaDE learns strategy
probabilities and crossover-rate medians, EPSDE keeps per-individual pool
combinations, CoDE races three differently parameterized candidates per
target, JADE adapts scalar location parameters, and SHADE generalizes
JADE with a success-history memory. The Cauchy rescue plugs into all of
them the same way it plugs into plain DE.
"""

import numpy as np

from cauchyde import (EPSDE, JADE, SHADE, AcmConfig, Budget, CoDE, SaDE,
                      get_objective, run)

objective = get_objective("griewank", 15)
budget = Budget(nfe_max=60_000)

factories = {
    "SaDE": lambda cauchy: SaDE(lp=20, cauchy=cauchy),
    "EPSDE": lambda cauchy: EPSDE(cauchy=cauchy),
    "CoDE": lambda cauchy: CoDE(cauchy=cauchy),
    "JADE": lambda cauchy: JADE(cauchy=cauchy),
    "SHADE": lambda cauchy: SHADE(cauchy=cauchy),
}

print(f"{objective.name} at D={objective.dimension}, "
      f"budget {budget.nfe_max} evaluations, 3 seeded runs each\n")
print(f"{'variant':<8} {'original':>14} {'with rescue':>14}")
for name, make in factories.items():
    plain = np.median([run(make(None), objective, np_size=60, budget=budget,
                           seed=7 + k).final_fev for k in range(3)])
    rescued = np.median([run(make(AcmConfig()), objective, np_size=60,
                             budget=budget, seed=7 + k).final_fev
                         for k in range(3)])
    print(f"{name:<8} {plain:>14.4e} {rescued:>14.4e}")

print("\nnote CoDE charges three evaluations per target per generation, so "
      "it advances fewer generations under the same budget")
