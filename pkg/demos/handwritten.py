# # Handwritten numerals (UCI Multiple Features)
#
# 2000 digits described by six views: profile correlations (216), Fourier
# coefficients (76), Karhunen-Loeve coefficients (64), morphological
# features (6), pixel averages (240) and Zernike moments (47).
#
# The raw views differ by orders of magnitude in scale, and their squared
# distances grow with dimension. The exponents are driven by the per-view
# loss range, so here every feature is min-max scaled and each view is then
# divided by the square root of its dimension ("minmax_view").
#
# The data files come from the copy bundled with mvlearn:
#
#     pip install --no-deps mvlearn
#
# or point NSMVC_HANDWRITTEN_DIR at the original mfeat-* files.

import os
import sys
import tempfile

from nsmvc.experiment import ExperimentConfig, run_experiment
from nsmvc.uci import export_multifeature, find_mvlearn_copy

source = os.environ.get("NSMVC_HANDWRITTEN_DIR") or find_mvlearn_copy()
if source is None:
    sys.exit("UCI Multiple Features not found; install mvlearn or set NSMVC_HANDWRITTEN_DIR")

workdir = tempfile.mkdtemp(prefix="handwritten-")
manifest = export_multifeature(workdir, source, normalize="minmax_view")
print("manifest written to", manifest)

# ## NSMVC against the k-means baselines
#
# Five trials each keep this quick; the acceptance suite uses 30.

config = ExperimentConfig(dataset=str(manifest), trials=5, seed=1000, solver={"alpha": 0.3, "T": 3})
for method in ("nsmvc", "km_all", "km_view"):
    report = run_experiment(config.replace(method=method))
    for variant, per in report.summary().items():
        print(f"{variant:>7}  " + "  ".join(f"{m} {s.mean:.3f}+-{s.std:.3f}" for m, s in per.items()))

# ## Final exponents
#
# The view with the smallest maximal loss gets exponent 1; the others are
# scaled down in proportion.

report = run_experiment(config.replace(trials=1))
names = [name for name in report.views]
for name, eta in zip(names, report.trials[0].etas):
    print(f"{name:>22}  eta {eta:.3f}")
