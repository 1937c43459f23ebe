"""Linear convergence with and without chained short steps.

On a strongly convex quadratic over the simplex, the plain away-step variant
started from a full-support point takes maximal drop steps that break the
per-iteration guarantee; the chained version absorbs them inside the inner
loop and contracts every outer step.  The observed contraction is compared
with the theoretical factors built from the pyramidal width.
"""

import numpy as np

import sscfw
from sscfw import ActiveIterate, run_plain, run_with_ssc
from sscfw.geometry import pwidth_simplex, rate_constants
from sscfw.rates import f_star_oracle, fitted_contraction

mu, L = 0.05, 1.0
region = sscfw.simplex(5)
obj = sscfw.sc_quadratic(5, mu, L, seed=4)
f_star = f_star_oracle(obj, region)
x0 = ActiveIterate.barycenter(region)

plain = run_plain("afw", obj, region, x0, budget=2000, tol=1e-9)
obj.reset_gradient_counter()
chained = run_with_ssc("afw", obj, region, x0, budget=2000, tol=1e-9)

tau_p = pwidth_simplex(5) / np.sqrt(2.0)
consts = rate_constants(mu, L, tau_p / 2.0)
q_gs = max(consts["q_gs_short"], consts["q_gs_fw"])

print(f"problem: simplex(5), mu/L = {mu / L}, f* = {f_star:.8f}")
print(f"pyramidal width tau_p = {tau_p:.4f}  ->  q_good_step = {q_gs:.6f}, "
      f"q_chained = {consts['q']:.6f}")

print("\n                     plain AFW   AFW + chains")
print(f"outer iterations   {len(plain.records):10d} {len(chained.records):12d}")
print(f"good steps         {plain.good_step_count:10d} {chained.good_step_count:12d}")
print(f"bad (maximal) steps{plain.bad_step_count:10d} {chained.bad_step_count:12d}")
print(f"gradient calls     {plain.gradient_calls:10d} {chained.gradient_calls:12d}")
print(f"fitted contraction {fitted_contraction(plain, f_star):10.6f} "
      f"{fitted_contraction(chained, f_star):12.6f}")
print(f"final f - f*       {plain.final_f - f_star:10.2e} "
      f"{chained.final_f - f_star:12.2e}")

gaps = np.array(chained.f_values) - f_star
print("\nchained run, every 5th iterate:  f_k - f*   vs   q^k (f_0 - f*)")
for k in range(0, len(gaps), 5):
    print(f"  k={k:3d}   {gaps[k]:.3e}   {gaps[0] * consts['q'] ** k:.3e}")
