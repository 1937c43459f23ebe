"""Short step chains: frozen-gradient inner loops with a two-ball trust region.

A chain starts at an outer iterate ``x`` with frozen linear functional
``g = -grad f(x)`` and repeats short steps of the chosen variant until one of:

* the selected direction vanishes (the chain point is stationary for ``g``,
  which includes landing exactly on the linear minimizer),
* the trust-region stepsize ``beta_j`` limits the step (``alpha_j = beta_j``),
* a full FW step reaches the linear minimizer.

The trust region is the intersection of the decrease ball
``B1 = ball(x + g/2L, ||g||/2L)`` (fixed along the chain, guarantees
``f(y) <= f(x) - L/2 ||y - x||^2`` for every chain point) and the slope ball
``B2_j = ball(x, <g, unit(d_j)>/L)`` (guarantees monotonicity of f).

Termination is classified into the four cases that certify the hidden point:
case 1 terminates with a point stationary for ``g``; case 2 finds the chain
point on or outside its slope ball; case 3 exits through the slope ball
boundary; case 4 exits through the decrease ball boundary.  The hidden index
is the final point for cases 1-2, the second-to-last point for case 3, and
the index of the smallest recorded normalized slope for case 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .directions import (
    ActiveIterate,
    DirectionKind,
    DirectionProposal,
    afw_select,
    apply_step,
    fdfw_select,
    pfw_direction,
)
from .region import Region

MEMBERSHIP_TOL = 1e-12   # slack on squared distances; boundary counts as inside
_RETURN_EQ_TOL = 1e-14   # alpha_j = beta_j comparison

METHODS = ("afw", "pfw", "fdfw")

__all__ = ["TerminationCase", "SSCTrace", "ball_exit_step", "beta_step", "run_ssc", "METHODS"]


class TerminationCase(IntEnum):
    STATIONARY_OR_ZERO_DIR = 1
    OUTSIDE_SECOND_BALL = 2
    SECOND_BALL_BOUNDARY = 3
    FIRST_BALL_BOUNDARY = 4


@dataclass
class SSCTrace:
    """Inner record of one chain: points, stepsizes, directions, termination."""

    y_points: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    betas: list = field(default_factory=list)
    alpha_maxes: list = field(default_factory=list)
    directions: list = field(default_factory=list)
    termination_case: TerminationCase | None = None
    hidden_index: int = 0
    inner_count: int = 0

    @property
    def hidden_point(self) -> np.ndarray:
        return self.y_points[self.hidden_index]


def ball_exit_step(center, radius, y, d) -> float:
    """Largest beta >= 0 keeping ``y + beta d`` inside the ball (closed form).

    ``y`` must be inside the ball up to 1e-12 on the distance; points on the
    boundary with an outward direction get 0.
    """
    center = np.asarray(center, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    nd2 = float(d @ d)
    if nd2 == 0.0:
        raise ValueError("d must be nonzero")
    u = y - center
    dist = np.linalg.norm(u)
    if dist > radius + 1e-12:
        raise ValueError(f"y lies outside the ball (dist {dist:.3e} > radius {radius:.3e})")
    c = min(float(u @ u) - radius * radius, 0.0)
    b = float(u @ d)
    disc = b * b - nd2 * c
    if disc < 0.0:
        if disc < -1e-14:
            raise ValueError("negative discriminant beyond tolerance")
        disc = 0.0
    return max(0.0, (-b + np.sqrt(disc)) / nd2)


def _trust_region_balls(x_bar, g, lipschitz, d):
    norm_g = np.linalg.norm(g)
    slope = float(np.asarray(g) @ np.asarray(d))
    dnorm = float(np.linalg.norm(d))
    c1 = x_bar + np.asarray(g) / (2.0 * lipschitz)
    r1 = norm_g / (2.0 * lipschitz)
    c2 = np.asarray(x_bar, dtype=float)
    r2 = slope / (lipschitz * dnorm)
    return (c1, r1), (c2, r2)


def _beta_step_detail(x_bar, g, lipschitz, y, d):
    """(beta, inside1, inside2, exit1, exit2) for the two trust-region balls.

    Membership uses squared distances with absolute slack; boundary counts
    as inside.  Exits are None when the point is outside either ball.
    """
    (c1, r1), (c2, r2) = _trust_region_balls(x_bar, g, lipschitz, d)
    y = np.asarray(y, dtype=float)
    d1 = y - c1
    d2 = y - c2
    inside1 = float(d1 @ d1) <= r1 * r1 + MEMBERSHIP_TOL
    inside2 = float(d2 @ d2) <= r2 * r2 + MEMBERSHIP_TOL
    if not (inside1 and inside2):
        return 0.0, inside1, inside2, None, None
    exit1 = ball_exit_step(c1, r1, y, d)
    exit2 = ball_exit_step(c2, r2, y, d)
    return min(exit1, exit2), True, True, exit1, exit2


def beta_step(x_bar, g, lipschitz, y, d) -> float:
    """Maximal trust-region stepsize; 0 when ``y`` is outside the region."""
    x_bar = np.asarray(x_bar, dtype=float)
    g = np.asarray(g, dtype=float)
    d = np.asarray(d, dtype=float)
    slope = float(g @ d)
    if np.linalg.norm(d) == 0.0 or slope <= 0.0:
        raise ValueError("beta_step needs a descent direction for g")
    beta, *_ = _beta_step_detail(x_bar, g, lipschitz, y, d)
    return beta


def _select(method: str, region: Region, iterate: ActiveIterate, g, lmo_index):
    if method == "afw":
        return afw_select(region, iterate, g, lmo_index=lmo_index)
    if method == "pfw":
        return pfw_direction(region, iterate, g, lmo_index=lmo_index)
    if method == "fdfw":
        return fdfw_select(region, iterate, g, lmo_index=lmo_index)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _is_full_fw(proposal: DirectionProposal, alpha: float) -> bool:
    return (proposal.kind is DirectionKind.FW
            and abs(alpha - proposal.alpha_max) <= 1e-14
            and abs(alpha - 1.0) <= 1e-12)


def run_ssc(method: str, region: Region, lipschitz: float, start: ActiveIterate, g):
    """Run one short step chain from ``start`` with frozen functional ``g``.

    Returns ``(end_iterate, SSCTrace)``.  The linear minimizer is computed
    once and reused (the functional never changes inside the chain).  The
    inner-step safety cap ``#atoms + n + 2`` is an assertion on the finite
    termination guarantees and is never hit on valid inputs.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    g = np.asarray(g, dtype=float)
    lipschitz = float(lipschitz)
    x_bar = start.point.copy()
    lmo_index = region.lmo(g)
    cap = region.atom_set.m + region.n + 2

    trace = SSCTrace(y_points=[x_bar.copy()])
    y = start
    j = 0
    while True:
        proposal = _select(method, region, y, g, lmo_index)
        if proposal.is_zero:
            trace.termination_case = TerminationCase.STATIONARY_OR_ZERO_DIR
            trace.hidden_index = j
            trace.inner_count = j
            return y, trace

        beta, inside1, inside2, exit1, exit2 = _beta_step_detail(
            x_bar, g, lipschitz, y.point, proposal.d
        )
        if not inside1:
            # the decrease ball caps every stepsize and hitting its boundary
            # returns, so leaving it means the bookkeeping is broken
            raise RuntimeError("chain point left the decrease ball")
        alpha = min(proposal.alpha_max, beta)
        y_next = apply_step(y, proposal, alpha)

        trace.directions.append(proposal)
        trace.alphas.append(float(alpha))
        trace.betas.append(float(beta))
        trace.alpha_maxes.append(float(proposal.alpha_max))
        trace.y_points.append(y_next.point.copy())

        if alpha >= beta - _RETURN_EQ_TOL:
            trace.inner_count = j + 1
            if not inside2:
                trace.termination_case = TerminationCase.OUTSIDE_SECOND_BALL
                trace.hidden_index = j + 1
            elif exit2 <= exit1:
                trace.termination_case = TerminationCase.SECOND_BALL_BOUNDARY
                trace.hidden_index = j
            else:
                trace.termination_case = TerminationCase.FIRST_BALL_BOUNDARY
                slopes = [p.slope / p.norm for p in trace.directions]
                trace.hidden_index = int(np.argmin(slopes))
            return y_next, trace

        if _is_full_fw(proposal, alpha):
            # the chain point is now the linear minimizer, stationary for g
            trace.termination_case = TerminationCase.STATIONARY_OR_ZERO_DIR
            trace.hidden_index = j + 1
            trace.inner_count = j + 1
            return y_next, trace

        y = y_next
        j += 1
        if j > cap:
            raise RuntimeError(
                "SSC inner-step safety cap exceeded; active-set bookkeeping is broken"
            )
