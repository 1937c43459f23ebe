"""Nonconvex decay of the stationarity measure.

Runs the chained away-step variant on an indefinite quadratic over the
4-cube.  The best hidden-point stationarity seen so far must fall below
sqrt(2 (f_0 - f_final) / (K^2 L (k+1))), the square-root-decay envelope
built from the angle constant K = tau / (L (1 + tau)).
"""

import numpy as np

import sscfw
from sscfw import ActiveIterate, annotate_hidden_points, run_with_ssc

region = sscfw.hypercube(4)
obj = sscfw.indefinite_quadratic(4, 1.0, seed=1)
eigs = np.linalg.eigvalsh(obj.Q)
print(f"indefinite quadratic on [0,1]^4: spectrum [{eigs.min():.2f}, {eigs.max():.2f}]")

bounds = sscfw.estimated_bounds(region.atoms, samples=4000, seed=1729)
tau = bounds.tau_afw
K = tau / (obj.lipschitz * (1.0 + tau))
print(f"sampled pyramidal width {bounds.pwidth:.4f} ({bounds.source}), "
      f"tau = {tau:.4f}, K = {K:.4f}")

trace = run_with_ssc("afw", obj, region, ActiveIterate.from_vertex(region, 0),
                     budget=2000, tol=1e-10)
annotate_hidden_points(trace, obj, region)
f_tilde = trace.final_f
f0 = trace.f_values[0]
print(f"run: {len(trace.records)} outer steps, f {f0:.4f} -> {f_tilde:.4f}, "
      f"final stationarity {trace.final_stationarity:.2e}")

print("\n   k    min_i pi(x~_i)    envelope(k)")
best = np.inf
marks = {0, 1, 2, 4, 8, 16, 32, 64}
for k, rec in enumerate(trace.records):
    best = min(best, rec.hidden_stationarity)
    if k in marks or k == len(trace.records) - 1:
        env = np.sqrt(2 * (f0 - f_tilde) / (K ** 2 * obj.lipschitz * (k + 1)))
        print(f"  {k:4d}   {best:.6e}   {env:.6e}")
