"""Registering shifted and rotated objectives from a data directory.

Teams holding standardized shift vectors and rotation matrices can drop
them into a directory and get registered objectives back; the built-in
suite keeps working when the directory is absent. Each entry is evaluated
as base(M @ (x - shift)) + f_star, so the optimum sits at the shift.
"""

import tempfile
from pathlib import Path

import numpy as np

from cauchyde import Budget, DE, load_cec_suite, run

root = Path(tempfile.mkdtemp(prefix="cauchyde-suite-"))

# a shifted rastrigin with a declared optimum value of 400
shift = np.round(np.random.default_rng(1).uniform(-2, 2, size=10), 3)
lines = ["# base=rastrigin f_star=400.0 lower=-100 upper=100",
         " ".join(str(v) for v in shift)]
(root / "F5_D10_shift.txt").write_text("\n".join(lines) + "\n")

# a rotated sphere: any orthogonal matrix keeps the level sets spherical
theta = np.pi / 4
rot = np.eye(10)
rot[:2, :2] = [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
(root / "F1_D10_shift.txt").write_text(
    "# base=sphere f_star=100.0 lower=-100 upper=100\n"
    + " ".join("1.0" for _ in range(10)) + "\n")
(root / "F1_D10_rot.txt").write_text(
    "\n".join(" ".join(str(v) for v in row) for row in rot) + "\n")

suite = load_cec_suite(root)
print(f"registered: {sorted(suite)}")
for name, objective in sorted(suite.items()):
    at_optimum = objective.evaluate(objective.x_star)
    print(f"  {name}: value at declared optimizer = {at_optimum}")

objective = suite["F5_D10"]
record = run(DE(), objective, np_size=50, budget=Budget(nfe_max=30_000), seed=2)
print(f"\noptimizing {objective.name}: final error "
      f"{record.final_fev:.4f} (raw best {record.final_fev + objective.f_star:.4f})")

print(f"\nmissing directories stay silent: "
      f"{load_cec_suite(root / 'not-there') == {}}")
