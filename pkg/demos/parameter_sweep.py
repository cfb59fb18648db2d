# # Sensitivity to the pace start point and the number of rounds
#
# alpha sets the fraction of each view's loss range admitted in the first
# round and T the number of rounds until every sample is admitted. The
# sweep runs a full multi-trial experiment per grid cell and writes a flat
# table that can be fed to any surface-plot tool.

import csv
import tempfile
from pathlib import Path

import numpy as np

from nsmvc.experiment import ExperimentConfig, best_cell, sweep

synth = {
    "n": 400,
    "k": 4,
    "dims": [3, 6, 30],
    "separation": 3.0,
    "corruptions": [{"view": 2, "mode": "gaussian_noise", "strength": 0.9}],
    "seed": 3,
}
out = Path(tempfile.mkdtemp(prefix="sweep-"))
config = ExperimentConfig(synth=synth, trials=5, out=str(out))

alphas = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
rounds = [3, 4, 5, 6, 7, 8]
cells = sweep(config, alphas, rounds)

# ## Mean ACC per cell

grid = np.array([[c.report.summary()["nsmvc"]["acc"].mean for c in cells if c.alpha == a] for a in alphas])
print("alpha \\ T " + " ".join(f"{T:>6}" for T in rounds))
for a, row in zip(alphas, grid):
    print(f"{a:>9} " + " ".join(f"{x:6.3f}" for x in row))

best = best_cell(cells)
print(f"best cell: alpha={best.alpha}, T={best.T}")

# The same numbers, one row per cell, are in sweep.csv next to sweep.json.

with open(out / "sweep.csv", newline="") as fh:
    rows = list(csv.DictReader(fh))
print(out / "sweep.csv", len(rows), "rows, columns:", list(rows[0]))
