"""The four descent directions and the angle condition.

Shows FW, away, pairwise and in-face proposals on a worked simplex example,
then samples random (point, payoff) pairs to display how far each variant's
directional slope ratio stays above its pyramidal-width lower bound.
"""

import numpy as np

import sscfw
from sscfw import ActiveIterate, afw_select, away_direction, dsb_measure, \
    fdfw_select, fw_direction, pfw_direction
from sscfw.geometry import pwidth_simplex
from sscfw.rng import SplitMix64

region = sscfw.simplex(3)
it = ActiveIterate.from_weights(region, {0: 0.25, 1: 0.75})
g = np.array([0.0, 1.0, 0.0])  # negative gradient: push mass onto e2

print(f"point {it.point}, active set {it.support}, payoff {g}")
for name, prop in [
    ("FW      ", fw_direction(region, it, g)),
    ("away    ", away_direction(it, g)),
    ("pairwise", pfw_direction(region, it, g)),
    ("AFW pick", afw_select(region, it, g)),
    ("FDFW    ", fdfw_select(region, it.point, g)),
]:
    print(f"  {name} kind={prop.kind.value:8s} d={np.round(prop.d, 3)} "
          f"slope={prop.slope:.3f} alpha_max={prop.alpha_max:.3f}")

print("\nDirectional slope ratios vs the pyramidal-width bounds on simplex(3)")
tau_p = pwidth_simplex(3) / np.sqrt(2.0)
print(f"  PFW bound  {tau_p:.4f}   AFW/FDFW bound {tau_p / 2:.4f}")

rng = SplitMix64(12)
mins = {"pfw": 1.0, "afw": 1.0, "fdfw": 1.0}
for _ in range(3000):
    m = region.atom_set.m
    support = sorted({rng.randint(m) for _ in range(1 + rng.randint(m))})
    w = rng.dirichlet(len(support))
    it2 = ActiveIterate.from_weights(region, dict(zip(support, w)))
    g = rng.normal(3)
    if region.tangent_projection_norm(it2.point, g) <= 1e-8:
        continue
    mins["pfw"] = min(mins["pfw"], dsb_measure(region, it2, g, pfw_direction(region, it2, g).d))
    mins["afw"] = min(mins["afw"], dsb_measure(region, it2, g, afw_select(region, it2, g).d))
    mins["fdfw"] = min(mins["fdfw"], dsb_measure(region, it2.point, g,
                                                 fdfw_select(region, it2.point, g).d))
print(f"  observed minima over 3000 samples: pfw {mins['pfw']:.4f}, "
      f"afw {mins['afw']:.4f}, fdfw {mins['fdfw']:.4f}")
