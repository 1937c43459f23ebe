"""Post-hoc verification of the quantitative guarantees against run traces.

Every verifier is a pure function of a recorded trace (plus known constants)
and returns a :class:`RateCheck` with the worst observed violation.  The
reference optimal value for convex problems comes from an independent
projected-gradient oracle so none of the checks is circular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .solver import RunTrace, StepKind

__all__ = [
    "RateCheck",
    "RateReport",
    "verify_sufficient_decrease",
    "verify_linear_rate",
    "verify_sqrt_rate",
    "verify_tail_length",
    "verify_gap_domination",
    "annotate_hidden_points",
    "fitted_contraction",
    "f_star_oracle",
    "project_onto_region",
]


@dataclass
class RateCheck:
    """One verified claim: worst violation vs. its tolerance."""

    claim: str
    worst_violation: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass
class RateReport:
    entries: list = field(default_factory=list)

    def add(self, check: RateCheck):
        self.entries.append(check)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "entries": [
                {
                    "claim": e.claim,
                    "worst_violation": e.worst_violation,
                    "tolerance": e.tolerance,
                    "passed": e.passed,
                    "details": e.details,
                }
                for e in self.entries
            ],
        }


def _check(claim, worst, tol, **details) -> RateCheck:
    return RateCheck(claim, float(worst), float(tol), bool(worst <= tol), details)


# -- per-step sufficient decrease ---------------------------------------------


def verify_sufficient_decrease(trace: RunTrace, slack: float = 1e-9) -> RateCheck:
    """f(x_k) - f(x_{k+1}) >= L/2 ||x_k - x_{k+1}||^2 at every outer step."""
    fs = trace.f_values
    worst = 0.0
    for k, rec in enumerate(trace.records):
        lhs = fs[k] - fs[k + 1]
        rhs = 0.5 * trace.lipschitz * rec.step_norm ** 2
        worst = max(worst, rhs - lhs)
    return _check("sufficient_decrease", worst, slack, steps=len(trace.records))


# -- linear rate under the KL condition ----------------------------------------


def good_step_counts(trace: RunTrace) -> list:
    """gamma(k): number of good steps among the first k steps, k = 0..len."""
    counts = [0]
    for rec in trace.records:
        good = rec.step_kind in (StepKind.GOOD_SHORT, StepKind.FULL_FW, StepKind.SSC_OUTER)
        counts.append(counts[-1] + int(good))
    return counts


def fitted_contraction(trace: RunTrace, f_star: float) -> float | None:
    """Geometric-mean per-step gap ratio, ignoring the numerical floor."""
    gaps = [f - f_star for f in trace.f_values]
    if not gaps or gaps[0] <= 0:
        return None
    floor = 1e-13 * gaps[0]
    logs = []
    for a, b in zip(gaps, gaps[1:]):
        if a > floor and b > floor:
            logs.append(math.log(b / a))
    if not logs:
        return None
    return float(math.exp(sum(logs) / len(logs)))


def verify_linear_rate(trace: RunTrace, f_star: float, q: float,
                       rel_slack: float = 1e-7,
                       exponent: str = "iterations") -> RateCheck:
    """f_k - f* <= q^(e_k) (f_0 - f*) with e_k = k or the good-step count."""
    if exponent not in ("iterations", "good_steps"):
        raise ValueError("exponent must be 'iterations' or 'good_steps'")
    gaps = np.array(trace.f_values) - f_star
    if gaps.min() < -1e-9:
        raise ValueError(
            f"iterate value below the reference optimum by {-gaps.min():.3e}; wrong f*"
        )
    if exponent == "iterations":
        exps = np.arange(len(gaps))
    else:
        exps = np.array(good_step_counts(trace))
    bounds = gaps[0] * np.power(q, exps) * (1.0 + rel_slack)
    scale = max(gaps[0], 1e-300)
    worst = float(((gaps - bounds) / scale).max())
    return _check(
        f"linear_rate[{exponent}]", worst, 0.0,
        q=q, f_star=f_star, fitted=fitted_contraction(trace, f_star),
    )


# -- nonconvex sqrt(k) rate ----------------------------------------------------


def annotate_hidden_points(trace: RunTrace, obj, region):
    """Fill hidden-point stationarity and FW gap on each chained record.

    Runs after the solve (the solver itself performs exactly one gradient
    evaluation per outer iterate; verification-time evaluations are separate).
    """
    for rec in trace.records:
        if rec.ssc is None or rec.hidden_stationarity is not None:
            continue
        x_tilde = rec.ssc.hidden_point
        g = -obj.gradient(x_tilde)
        rec.hidden_stationarity = region.tangent_projection_norm(x_tilde, g)
        rec.hidden_gap = region.fw_gap(x_tilde, g)
    return trace


def verify_sqrt_rate(trace: RunTrace, K: float, f_tilde: float,
                     rel_slack: float = 1e-7, k_max: int | None = None) -> RateCheck:
    """min_{i<=k} pi(x~_i) <= min_{i<=k} ||x_{i+1}-x_i|| / K <= sqrt-decay bound.

    Requires hidden stationarities recorded (see ``annotate_hidden_points``).
    The chain is checked at every recorded k and, when the run stopped early,
    extended to ``k_max`` with the final running minimum.
    """
    recs = trace.records
    if any(r.hidden_stationarity is None for r in recs):
        raise ValueError("hidden stationarity missing; run annotate_hidden_points first")
    f0 = trace.f_values[0]
    excess = f0 - f_tilde
    worst_first = 0.0
    worst_second = 0.0
    min_pi = np.inf
    min_step = np.inf
    L = trace.lipschitz

    def bound(k):
        return math.sqrt(max(2.0 * excess, 0.0) / (K * K * L * (k + 1)))

    for k, rec in enumerate(recs):
        min_pi = min(min_pi, rec.hidden_stationarity)
        min_step = min(min_step, rec.step_norm)
        worst_first = max(worst_first, min_pi - (min_step / K) * (1.0 + rel_slack))
        worst_second = max(worst_second, min_pi - bound(k) * (1.0 + rel_slack))
    if k_max is not None and len(recs) > 0:
        for k in range(len(recs), k_max + 1):
            worst_second = max(worst_second, min_pi - bound(k) * (1.0 + rel_slack))
    worst = max(worst_first, worst_second)
    return _check(
        "sqrt_rate", worst, 0.0,
        K=K, f_tilde=f_tilde, min_hidden_stationarity=None if not recs else float(min_pi),
    )


# -- tail length under the KL condition ----------------------------------------


def verify_tail_length(trace: RunTrace, f_star: float, q: float,
                       rel_slack: float = 1e-6) -> RateCheck:
    """||x_k - x_final|| <= sqrt(2 (f_0 - f*)(1 - q)) / (sqrt(L)(1 - sqrt(q))) q^(k/2).

    This is the proof-form prefactor; the statement-form prefactor
    ``sqrt(2 - 2q) (f_0 - f*) / (sqrt(L)(1 - sqrt(q)))`` is reported in the
    details for comparison.
    """
    pts = trace.points
    x_final = pts[-1]
    f0_gap = max(trace.f_values[0] - f_star, 0.0)
    L = trace.lipschitz
    prefactor = math.sqrt(2.0 * f0_gap * (1.0 - q)) / (math.sqrt(L) * (1.0 - math.sqrt(q)))
    statement_prefactor = math.sqrt(2.0 - 2.0 * q) * f0_gap / (math.sqrt(L) * (1.0 - math.sqrt(q)))
    worst = 0.0
    scale = max(prefactor, 1e-300)
    for k, x in enumerate(pts):
        dist = float(np.linalg.norm(x - x_final))
        bound = prefactor * q ** (k / 2.0) * (1.0 + rel_slack)
        worst = max(worst, (dist - bound) / scale)
    return _check(
        "tail_length", worst, 0.0,
        prefactor=prefactor,
        statement_prefactor=statement_prefactor,
        vacuous=bool(prefactor > trace.region_diameter),
    )


# -- FW gap domination -----------------------------------------------------------


def verify_gap_domination(trace: RunTrace, slack: float = 1e-10) -> RateCheck:
    """G(x) <= D pi_x(-grad f(x)) at every visited iterate."""
    worst = 0.0
    D = trace.region_diameter
    for gap, pi in zip(
        [r.fw_gap for r in trace.records] + [trace.final_gap],
        [r.stationarity for r in trace.records] + [trace.final_stationarity],
    ):
        worst = max(worst, gap - D * pi)
    return _check("gap_domination", worst, slack)


# -- independent optimal-value oracle ---------------------------------------------


def project_onto_region(region, z) -> np.ndarray:
    """Euclidean projection onto a built-in region (oracle machinery only)."""
    z = np.asarray(z, dtype=float)
    if region.kind == "hypercube":
        return np.clip(z, 0.0, 1.0)
    if region.kind == "simplex":
        return _project_simplex(z, 1.0)
    if region.kind == "l1ball":
        r = region.params["radius"]
        if np.abs(z).sum() <= r:
            return z.copy()
        w = _project_simplex(np.abs(z), r)
        return np.sign(z) * w
    raise NotImplementedError(f"no projection for region kind {region.kind!r}")


def _project_simplex(z: np.ndarray, total: float) -> np.ndarray:
    """Sort-based projection onto {x >= 0, sum x = total}."""
    u = np.sort(z)[::-1]
    css = np.cumsum(u)
    rho = np.flatnonzero(u * np.arange(1, len(z) + 1) > css - total)[-1]
    theta = (css[rho] - total) / (rho + 1.0)
    return np.maximum(z - theta, 0.0)


_F_STAR_CACHE: dict = {}


def f_star_oracle(obj, region, max_iter: int = 1_000_000, tol: float = 1e-12) -> float:
    """Optimal value by a high-budget projected-gradient solve, cached.

    Independent of the Frank-Wolfe machinery: fixed stepsize 1/L projected
    gradient run to a 1e-12 step residual.  Only meaningful for convex
    objectives.
    """
    key = None
    if hasattr(obj, "fingerprint"):
        key = (region.fingerprint(), obj.fingerprint())
        if key in _F_STAR_CACHE:
            return _F_STAR_CACHE[key]
    x = project_onto_region(region, np.zeros(region.n))
    step = 1.0 / obj.lipschitz
    grad_fn = obj._gradient_fn  # bypass the call counter; oracle is verification-time
    for _ in range(max_iter):
        x_next = project_onto_region(region, x - step * grad_fn(x))
        if np.linalg.norm(x_next - x) <= tol:
            x = x_next
            break
        x = x_next
    value = obj.value(x)
    if key is not None:
        _F_STAR_CACHE[key] = value
    return value
