"""
Recovering exponents from data
==============================

Draw a million variates, then compare three estimators and the shape
classifier.  Takes a few seconds.
"""
import numpy as np

from brf import (
    BrfParams,
    classify_shape,
    fit_moments,
    fit_rank,
    fit_tails,
    log_histogram,
    sample_x,
    sample_z,
)

truth = BrfParams(1.0, 0.99, 0.3)
z = sample_z(truth, 10**6, seed=1).values

mom = fit_moments(z)
jk = fit_moments(z, jackknife=True)
hist = log_histogram(z, 100, pre_logged=True)
tails = fit_tails(hist, 0.1, 0.9)
# rank regression sorts the data, so a smaller sample keeps it quick
rank = fit_rank(sample_x(truth, 10**4, seed=1).values)

print("method              a        b")
for name, fit in [("moments", mom), ("jackknife", jk), ("tails", tails), ("rank", rank)]:
    print(f"{name:<16}{fit.params.a:8.4f} {fit.params.b:8.4f}")
print(f"truth           {truth.a:8.4f} {truth.b:8.4f}")

# the tail fit is biased by curvature near the quantile cuts; the
# asymptote only becomes exact far out
print("tail cut points:", tails.diagnostics["z_left_cut"], tails.diagnostics["z_right_cut"])

rng = np.random.default_rng(1)
corpora = {
    "pareto": sample_z(BrfParams(1.0, 0.5, 0.0), 10**6, seed=1).values,
    "lognormal": rng.normal(0.0, 1.0, 10**6),
    "brf": z,
}
for name, values in corpora.items():
    shape = classify_shape(log_histogram(values, 100, pre_logged=True))
    print(f"{name:<10} -> {shape.variant.value}")
