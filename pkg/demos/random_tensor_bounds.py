"""Upper bound, lower bound and heuristic maximum on random Rademacher tensors.

For each n we draw a handful of order-4 tensors, run every certifier that
applies at q = d = 4, and print the medians.  The upper bound and the
heuristic maximum grow roughly like n and sqrt(n); the lower certificate
grows faster at these small sizes than it does asymptotically.
"""
import numpy as np

from tensorcert.report import certify, fit_slope
from tensorcert.tensor_model import sample_tensor

ns = [6, 8, 11, 16]
medians = {"upper_qd": [], "lower_qd": [], "fmax_est": []}
for n in ns:
    vals = {k: [] for k in medians}
    for seed in range(5):
        rep = certify(sample_tensor(n, 4, "rademacher", seed), 4, "both", fmax_restarts=10)
        res = rep["results"]
        vals["upper_qd"].append(res["upper_qd"]["bound"])
        vals["lower_qd"].append(res["lower_qd"]["bound"])
        vals["fmax_est"].append(res["fmax_est"]["value"])
    for k in medians:
        medians[k].append(float(np.median(vals[k])))
    print(f"n={n:3d}  lower={medians['lower_qd'][-1]:7.3f}  fmax~{medians['fmax_est'][-1]:7.3f}"
          f"  upper={medians['upper_qd'][-1]:7.3f}")

for k, meds in medians.items():
    fit = fit_slope(ns, meds)
    print(f"log-log slope of {k}: {fit['slope']:.2f} +/- {fit['stderr']:.2f}")
