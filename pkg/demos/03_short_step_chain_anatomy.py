"""One short step chain, step by step.

Freezes the gradient at an outer iterate and walks the chain: per inner step
the proposal kind, the variant's maximal stepsize, the two-ball trust-region
stepsize beta, and the chosen alpha.  The chain ends with a termination case
that certifies a hidden point whose stationarity is controlled by the length
of the outer step.
"""

import numpy as np

import sscfw
from sscfw import ActiveIterate, run_ssc

region = sscfw.simplex(5)
obj = sscfw.sc_quadratic(5, 0.05, 1.0, seed=8)

# a spread-out active set makes the chain drop several atoms
start = ActiveIterate.from_weights(region, {0: 0.4, 1: 0.3, 2: 0.2, 3: 0.1})
g = -obj.gradient(start.point)
print(f"outer point {np.round(start.point, 3)}")
print(f"stationarity pi = {region.tangent_projection_norm(start.point, g):.4f}, "
      f"|g| = {np.linalg.norm(g):.4f}, L = {obj.lipschitz}")

end, trace = run_ssc("afw", region, obj.lipschitz, start, g)

print(f"\nchain of {trace.inner_count} inner steps "
      f"(initial active set size {len(start.support)}):")
for j in range(trace.inner_count):
    p = trace.directions[j]
    print(f"  step {j}: {p.kind.value:8s} slope={p.slope: .4f} "
          f"alpha_max={trace.alpha_maxes[j]: .4f} beta={trace.betas[j]: .4f} "
          f"-> alpha={trace.alphas[j]: .4f}  f(y)={obj.value(trace.y_points[j + 1]): .6f}")

print(f"\ntermination case {int(trace.termination_case)} "
      f"({trace.termination_case.name.lower()})")
print(f"hidden point index {trace.hidden_index} of {trace.inner_count}")
x_tilde = trace.hidden_point
pi_tilde = region.tangent_projection_norm(x_tilde, -obj.gradient(x_tilde))
step = np.linalg.norm(end.point - start.point)
print(f"outer step length {step:.4f} vs hidden stationarity {pi_tilde:.4f}")

dec = obj.value(start.point) - obj.value(end.point)
print(f"decrease {dec:.6f} >= L/2 |dx|^2 = {0.5 * obj.lipschitz * step ** 2:.6f}")
