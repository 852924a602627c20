# The numeric probe recovers the first exponents of the discriminant branches
# from slopes of log|y| in log t and log|x|, independently of the expansions.

import numpy as np

from vanzone.cli import parse_polynomial
from vanzone.corpus import CORPUS
from vanzone.pipeline import RunConfig, run_pipeline
from vanzone.probe import estimate_pairs, snap

D = parse_polynomial("x*y^3 + t", variables=("x", "y", "t"))
for est in estimate_pairs(D, alpha=0.5, t_values=(1e-5, 1e-6)):
    print(est, "->", snap(est["t_slope"], 12), snap(est["x_slope"], 12))

# Slope by hand on the closed form |y| = |t/x|^(1/3): the fit is exact up to rounding
t = np.logspace(-3, -6, 4)
y = (t / 0.5) ** (1 / 3)  # |y| of every root
print("fitted t-slope", np.polyfit(np.log(t), np.log(y), 1)[0])

# Whole corpus: probe versus exact pairs
for g in CORPUS:
    res = run_pipeline(RunConfig(parse_polynomial(g.text), g.text, probe=True))
    p = res.probe["0"]
    print(f"{g.name:18s} agrees={p['agrees']!s:5s} residual={p['max_residual']:.1e} pairs={[q['pair'] for q in p['pairs']]}")
