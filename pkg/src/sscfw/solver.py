"""Outer loops: the plain stepsize-rule method and its short-step-chain wrapper.

Both solvers evaluate the gradient exactly once per visited iterate; the
chained solver passes the frozen functional into the inner loop, so it makes
no additional gradient calls by construction.  Every visited iterate gets a
trace record with the stationarity measure, the FW gap and the step taken.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .directions import (
    ActiveIterate,
    DirectionKind,
    afw_select,
    apply_step,
    fdfw_select,
    pfw_direction,
)
from .objective import QuadraticObjective, SmoothObjective
from .region import Region
from .ssc import METHODS, SSCTrace, run_ssc

__all__ = [
    "StepKind",
    "StopReason",
    "IterationRecord",
    "RunTrace",
    "run_plain",
    "run_with_ssc",
]


class StepKind(Enum):
    GOOD_SHORT = "good_short"
    FULL_FW = "full_fw"
    BAD_MAXIMAL = "bad_maximal"
    SSC_OUTER = "ssc_outer"


class StopReason(Enum):
    STATIONARY = "stationary"
    BUDGET = "budget"


@dataclass
class IterationRecord:
    """State at iterate ``k`` plus the step taken from it."""

    k: int
    f_value: float
    stationarity: float
    fw_gap: float
    step_kind: StepKind
    step_norm: float
    point: np.ndarray
    direction_kind: DirectionKind | None = None
    dsb: float | None = None
    alpha: float | None = None
    alpha_bar: float | None = None
    alpha_max: float | None = None
    ssc: SSCTrace | None = None
    hidden_stationarity: float | None = None
    hidden_gap: float | None = None


@dataclass
class RunTrace:
    """Per-run record consumed by the rate verifiers and the bench harness."""

    method: str
    wrapper: str
    lipschitz: float
    region_diameter: float
    records: list = field(default_factory=list)
    final_point: np.ndarray | None = None
    final_f: float | None = None
    final_stationarity: float | None = None
    final_gap: float | None = None
    stop_reason: StopReason | None = None
    gradient_calls: int = 0
    tol: float = 0.0

    @property
    def f_values(self) -> list:
        return [r.f_value for r in self.records] + [self.final_f]

    @property
    def points(self) -> list:
        return [r.point for r in self.records] + [self.final_point]

    @property
    def stationarities(self) -> list:
        return [r.stationarity for r in self.records] + [self.final_stationarity]

    @property
    def good_step_count(self) -> int:
        return sum(r.step_kind in (StepKind.GOOD_SHORT, StepKind.FULL_FW, StepKind.SSC_OUTER)
                   for r in self.records)

    @property
    def bad_step_count(self) -> int:
        return sum(r.step_kind is StepKind.BAD_MAXIMAL for r in self.records)


def _select_direction(method, region, iterate, g):
    if method == "afw":
        return afw_select(region, iterate, g)
    if method == "pfw":
        return pfw_direction(region, iterate, g)
    if method == "fdfw":
        return fdfw_select(region, iterate, g)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _evaluate(obj, region, x):
    grad = obj.gradient(x.point)
    g = -grad
    return (
        g,
        obj.value(x.point),
        region.tangent_projection_norm(x.point, g),
        region.fw_gap(x.point, g),
    )


def run_plain(method: str, obj: SmoothObjective, region: Region, x0: ActiveIterate,
              budget: int = 10_000, tol: float = 1e-8,
              stepsize_rule: str = "lipschitz") -> RunTrace:
    """Algorithm-style outer loop with alpha = min(alpha_bar, alpha_max).

    ``stepsize_rule`` is "lipschitz" (alpha_bar = <g,d>/(L ||d||^2)) or
    "linesearch" (exact quadratic linesearch).  Steps are classified good
    (alpha = alpha_bar), full FW (the iterate lands on the linear minimizer)
    or bad maximal (truncated by feasibility).
    """
    if stepsize_rule not in ("lipschitz", "linesearch"):
        raise ValueError("stepsize_rule must be 'lipschitz' or 'linesearch'")
    if stepsize_rule == "linesearch" and not isinstance(obj, QuadraticObjective):
        raise ValueError("exact linesearch needs a quadratic objective")
    if not region.contains(x0.point):
        raise ValueError("x0 is infeasible")
    lipschitz = obj.lipschitz
    trace = RunTrace(method, "plain", lipschitz, region.diameter, tol=tol)
    calls_before = obj.gradient_calls
    x = x0
    while True:
        g, f, stat, gap = _evaluate(obj, region, x)
        if stat <= tol or len(trace.records) >= budget:
            trace.stop_reason = StopReason.STATIONARY if stat <= tol else StopReason.BUDGET
            trace.final_point = x.point.copy()
            trace.final_f = f
            trace.final_stationarity = stat
            trace.final_gap = gap
            break
        proposal = _select_direction(method, region, x, g)
        if proposal.is_zero:
            # residual stationarity below the direction tolerance scale
            if stat <= 1e-10:
                trace.stop_reason = StopReason.STATIONARY
                trace.final_point = x.point.copy()
                trace.final_f = f
                trace.final_stationarity = stat
                trace.final_gap = gap
                break
            raise RuntimeError("no descent direction at a non-stationary point")
        if stepsize_rule == "lipschitz":
            alpha_bar = proposal.slope / (lipschitz * proposal.norm ** 2)
        else:
            alpha_bar = obj.exact_linesearch_step(x.point, proposal.d)
        alpha = min(alpha_bar, proposal.alpha_max)
        if alpha == alpha_bar:
            kind = StepKind.GOOD_SHORT
        elif (proposal.kind is DirectionKind.FW
              and abs(proposal.alpha_max - 1.0) <= 1e-12):
            kind = StepKind.FULL_FW
        else:
            kind = StepKind.BAD_MAXIMAL
        x_next = apply_step(x, proposal, alpha)
        trace.records.append(IterationRecord(
            k=len(trace.records),
            f_value=f,
            stationarity=stat,
            fw_gap=gap,
            step_kind=kind,
            step_norm=float(np.linalg.norm(x_next.point - x.point)),
            point=x.point.copy(),
            direction_kind=proposal.kind,
            dsb=proposal.slope / (stat * proposal.norm),
            alpha=float(alpha),
            alpha_bar=float(alpha_bar),
            alpha_max=float(proposal.alpha_max),
        ))
        x = x_next
    trace.gradient_calls = obj.gradient_calls - calls_before
    return trace


def run_with_ssc(method: str, obj: SmoothObjective, region: Region, x0: ActiveIterate,
                 budget: int = 10_000, tol: float = 1e-8) -> RunTrace:
    """Outer loop where every step is one short step chain (no bad steps)."""
    if not region.contains(x0.point):
        raise ValueError("x0 is infeasible")
    lipschitz = obj.lipschitz
    trace = RunTrace(method, "ssc", lipschitz, region.diameter, tol=tol)
    calls_before = obj.gradient_calls
    x = x0
    while True:
        g, f, stat, gap = _evaluate(obj, region, x)
        if stat <= tol or len(trace.records) >= budget:
            trace.stop_reason = StopReason.STATIONARY if stat <= tol else StopReason.BUDGET
            trace.final_point = x.point.copy()
            trace.final_f = f
            trace.final_stationarity = stat
            trace.final_gap = gap
            break
        x_next, inner = run_ssc(method, region, lipschitz, x, g)
        step_norm = float(np.linalg.norm(x_next.point - x.point))
        if step_norm == 0.0:
            if stat <= 1e-10:
                trace.stop_reason = StopReason.STATIONARY
                trace.final_point = x.point.copy()
                trace.final_f = f
                trace.final_stationarity = stat
                trace.final_gap = gap
                break
            raise RuntimeError("chain made no progress at a non-stationary point")
        trace.records.append(IterationRecord(
            k=len(trace.records),
            f_value=f,
            stationarity=stat,
            fw_gap=gap,
            step_kind=StepKind.SSC_OUTER,
            step_norm=step_norm,
            point=x.point.copy(),
            ssc=inner,
        ))
        x = x_next
    trace.gradient_calls = obj.gradient_calls - calls_before
    return trace
