"""Feasible regions and their cone geometry.

Builds the three polytope families, queries the linear minimization oracle,
minimal faces and maximal feasible steps, and shows the stationarity measure
(the norm of the gradient's tangent-cone projection) together with the FW-gap
domination inequality G(x) <= D * pi_x(-grad).
"""

import numpy as np

import sscfw

np.set_printoptions(precision=4, suppress=True)

simplex = sscfw.simplex(3)
cube = sscfw.hypercube(2)
cross = sscfw.l1_ball(3, radius=1.0)

print("== linear minimization oracle ==")
g = np.array([0.5, -1.0, 2.0])
idx = simplex.lmo(g)
print(f"simplex(3), payoff {g}: best atom #{idx} = {simplex.atom(idx)}")
g2 = np.array([1.0, -2.0])
print(f"hypercube(2), payoff {g2}: best vertex = {cube.atom(cube.lmo(g2))}")

print("\n== minimal faces ==")
for x in (np.array([1 / 3, 1 / 3, 1 / 3]), np.array([0.5, 0.5, 0.0]), np.eye(3)[2]):
    face = simplex.minimal_face(x)
    atoms = [tuple(simplex.atom(i)) for i in face.face_atoms]
    print(f"x = {x}: face dim {face.dim}, atoms {atoms}")

print("\n== maximal feasible steps ==")
x = np.array([0.5, 0.5, 0.0])
d = np.array([1.0, -1.0, 0.0])
print(f"from {x} along {d}: alpha_max = {simplex.max_feasible_step(x, d)}")

print("\n== tangent projections and the gap inequality ==")
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(2000):
    w = rng.dirichlet(np.ones(3))
    g = rng.standard_normal(3)
    pi = simplex.tangent_projection_norm(w, g)
    gap = simplex.fw_gap(w, g)
    worst = max(worst, gap - simplex.diameter * pi)
print(f"interior point, g = e2 at vertex e1: pi = "
      f"{simplex.tangent_projection_norm(np.eye(3)[0], np.array([0., 1., 0.])):.6f} "
      f"(closed form 1/sqrt(2) = {1 / np.sqrt(2):.6f})")
print(f"worst G(x) - D*pi(x) over 2000 samples: {worst:.2e}  (never positive)")

print("\n== cross-polytope ==")
print(f"l1 ball diameter = {cross.diameter}, atoms = {cross.atom_set.m}, "
      f"halfspaces = {len(cross.b_ub)}")
