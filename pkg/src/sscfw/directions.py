"""Active-set bookkeeping and the four descent-direction rules.

Directions are proposed against a fixed linear functional ``g`` (the negative
gradient, or the frozen gradient inside a short-step chain):

* FW:        d = s - x,  s the LMO atom, max stepsize 1
* away:      d = x - q,  q the worst active atom, max stepsize lam_q/(1-lam_q)
* pairwise:  d = s - q,  max stepsize lam_q
* in-face:   d = x - x_F, x_F worst atom of the minimal face, max stepsize by
  the feasibility ratio test (the FDFW convention; FDFW keeps no active set)

Selection ties prefer the FW direction, and atom-index ties in argmin/argmax
take the lowest index, so runs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .region import Region

DROP_TOL = 1e-12
ZERO_DIRECTION_TOL = 1e-12
_STATIONARY_PI_TOL = 1e-12

__all__ = [
    "DirectionKind",
    "DirectionProposal",
    "ActiveIterate",
    "fw_direction",
    "away_direction",
    "pfw_direction",
    "afw_select",
    "fdfw_select",
    "apply_step",
    "dsb_measure",
]


class DirectionKind(Enum):
    FW = "fw"
    AWAY = "away"
    PAIRWISE = "pairwise"
    IN_FACE = "in_face"


@dataclass
class DirectionProposal:
    kind: DirectionKind
    d: np.ndarray
    slope: float
    alpha_max: float
    to_atom: int | None = None
    from_atom: int | None = None

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.d))

    @property
    def is_zero(self) -> bool:
        """Stationarity surrogate: negligible direction or non-positive slope."""
        return self.norm <= ZERO_DIRECTION_TOL or self.slope <= ZERO_DIRECTION_TOL


class ActiveIterate:
    """Feasible point stored as an explicit convex combination of atoms.

    ``weights`` maps atom index -> positive weight; it is ``None`` for
    iterates produced by in-face steps (FDFW does not track active sets).
    The point is always recomputed from the weights when they exist.
    """

    def __init__(self, region: Region, point=None, weights=None):
        self.region = region
        if weights is not None:
            weights = {int(a): float(w) for a, w in weights.items() if w > DROP_TOL}
            if not weights:
                raise ValueError("weights must contain at least one positive entry")
            total = sum(weights.values())
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"weights sum to {total}, expected 1")
            point = np.zeros(region.n)
            for a, w in weights.items():
                point = point + w * region.atom(a)
        elif point is None:
            raise ValueError("need a point or weights")
        self.weights = weights
        self.point = np.asarray(point, dtype=float)

    @classmethod
    def from_vertex(cls, region: Region, index: int) -> "ActiveIterate":
        return cls(region, weights={int(index): 1.0})

    @classmethod
    def from_weights(cls, region: Region, weights) -> "ActiveIterate":
        return cls(region, weights=weights)

    @classmethod
    def from_point(cls, region: Region, point) -> "ActiveIterate":
        return cls(region, point=point)

    @classmethod
    def barycenter(cls, region: Region) -> "ActiveIterate":
        m = region.atom_set.m
        return cls(region, weights={a: 1.0 / m for a in range(m)})

    @property
    def support(self) -> list:
        if self.weights is None:
            raise ValueError("this iterate does not track an active set")
        return sorted(self.weights)

    def weight(self, index: int) -> float:
        return self.weights.get(int(index), 0.0)

    def copy(self) -> "ActiveIterate":
        if self.weights is None:
            return ActiveIterate(self.region, point=self.point.copy())
        return ActiveIterate(self.region, weights=dict(self.weights))


def _zero_proposal(kind: DirectionKind, n: int, **atoms) -> DirectionProposal:
    return DirectionProposal(kind, np.zeros(n), 0.0, np.inf, **atoms)


def fw_direction(region: Region, iterate, g, lmo_index: int | None = None) -> DirectionProposal:
    """Classic Frank-Wolfe direction toward the LMO atom; max stepsize 1."""
    g = np.asarray(g, dtype=float)
    x = iterate.point if isinstance(iterate, ActiveIterate) else np.asarray(iterate, float)
    s = region.lmo(g) if lmo_index is None else lmo_index
    d = region.atom(s) - x
    return DirectionProposal(DirectionKind.FW, d, float(g @ d), 1.0, to_atom=s)


def away_direction(iterate: ActiveIterate, g) -> DirectionProposal:
    """Move away from the active atom with the worst linear value."""
    g = np.asarray(g, dtype=float)
    support = iterate.support
    if not support:
        raise ValueError("away direction needs a nonempty active set")
    region = iterate.region
    values = [g @ region.atom(a) for a in support]
    q = support[int(np.argmin(values))]
    lam_q = iterate.weight(q)
    if lam_q >= 1.0 - DROP_TOL:
        # singleton active set: x is the atom itself, no room to move away
        return _zero_proposal(DirectionKind.AWAY, region.n, from_atom=q)
    d = iterate.point - region.atom(q)
    return DirectionProposal(
        DirectionKind.AWAY, d, float(g @ d), lam_q / (1.0 - lam_q), from_atom=q
    )


def pfw_direction(region: Region, iterate: ActiveIterate, g,
                  lmo_index: int | None = None) -> DirectionProposal:
    """Pairwise direction: mass moves from the worst active atom to the LMO atom."""
    g = np.asarray(g, dtype=float)
    support = iterate.support
    if not support:
        raise ValueError("pairwise direction needs a nonempty active set")
    s = region.lmo(g) if lmo_index is None else lmo_index
    values = [g @ region.atom(a) for a in support]
    q = support[int(np.argmin(values))]
    d = region.atom(s) - region.atom(q)
    return DirectionProposal(
        DirectionKind.PAIRWISE, d, float(g @ d), iterate.weight(q), to_atom=s, from_atom=q
    )


def afw_select(region: Region, iterate: ActiveIterate, g,
               lmo_index: int | None = None) -> DirectionProposal:
    """Better of the FW and away directions by slope; ties go to FW."""
    fw = fw_direction(region, iterate, g, lmo_index=lmo_index)
    away = away_direction(iterate, g)
    return away if away.slope > fw.slope else fw


def fdfw_select(region: Region, x_or_iterate, g,
                lmo_index: int | None = None) -> DirectionProposal:
    """Better of the in-face and FW directions; max stepsizes by feasibility."""
    g = np.asarray(g, dtype=float)
    x = (x_or_iterate.point if isinstance(x_or_iterate, ActiveIterate)
         else np.asarray(x_or_iterate, dtype=float))
    s = region.lmo(g) if lmo_index is None else lmo_index
    d_fw = region.atom(s) - x
    slope_fw = float(g @ d_fw)

    face = region.minimal_face(x)
    face_values = [g @ region.atom(a) for a in face.face_atoms]
    x_f = face.face_atoms[int(np.argmin(face_values))]
    d_face = x - region.atom(x_f)
    slope_face = float(g @ d_face)

    if slope_face > slope_fw and np.linalg.norm(d_face) > ZERO_DIRECTION_TOL:
        alpha_max = region.max_feasible_step(x, d_face)
        return DirectionProposal(DirectionKind.IN_FACE, d_face, slope_face, alpha_max,
                                 from_atom=x_f)
    if np.linalg.norm(d_fw) <= ZERO_DIRECTION_TOL:
        return _zero_proposal(DirectionKind.FW, region.n, to_atom=s)
    alpha_max = region.max_feasible_step(x, d_fw)
    return DirectionProposal(DirectionKind.FW, d_fw, slope_fw, alpha_max, to_atom=s)


def _is_maximal(alpha: float, alpha_max: float) -> bool:
    return np.isfinite(alpha_max) and alpha >= alpha_max * (1.0 - 1e-12)


def apply_step(iterate: ActiveIterate, proposal: DirectionProposal, alpha: float) -> ActiveIterate:
    """New iterate after ``x + alpha d`` with exact weight bookkeeping.

    Maximal away/pairwise steps remove ``from_atom`` exactly; weights below
    the drop tolerance are pruned; drift beyond 1e-9 in the weight sum is
    renormalized once and re-checked.
    """
    if alpha < 0 or alpha > proposal.alpha_max * (1.0 + 1e-12):
        raise ValueError(f"alpha={alpha} outside [0, {proposal.alpha_max}]")
    region = iterate.region
    if iterate.weights is None or proposal.kind is DirectionKind.IN_FACE:
        return ActiveIterate.from_point(region, iterate.point + alpha * proposal.d)

    w = dict(iterate.weights)
    if proposal.kind is DirectionKind.FW:
        s = proposal.to_atom
        w = {a: (1.0 - alpha) * v for a, v in w.items()}
        w[s] = w.get(s, 0.0) + alpha
    elif proposal.kind is DirectionKind.AWAY:
        q = proposal.from_atom
        w = {a: (1.0 + alpha) * v for a, v in w.items()}
        if _is_maximal(alpha, proposal.alpha_max):
            w.pop(q, None)
        else:
            w[q] = w[q] - alpha
    elif proposal.kind is DirectionKind.PAIRWISE:
        s, q = proposal.to_atom, proposal.from_atom
        if _is_maximal(alpha, proposal.alpha_max):
            w.pop(q, None)
        else:
            w[q] = w[q] - alpha
        w[s] = w.get(s, 0.0) + alpha
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown direction kind {proposal.kind}")

    if any(v < -1e-9 for v in w.values()):
        raise ValueError("step produced a negative weight beyond tolerance")
    w = {a: v for a, v in w.items() if v > DROP_TOL}
    if not w:
        raise ValueError("step emptied the active set")
    total = sum(w.values())
    if abs(total - 1.0) > 1e-9:
        w = {a: v / total for a, v in w.items()}
        if abs(sum(w.values()) - 1.0) > 1e-9:
            raise ValueError("weights violate the simplex invariants after renormalization")
    return ActiveIterate.from_weights(region, w)


def dsb_measure(region: Region, x_or_iterate, g, d) -> float:
    """Directional slope ratio <g, d> / (pi_x(g) ||d||); 1 at stationary points."""
    g = np.asarray(g, dtype=float)
    d = np.asarray(d, dtype=float)
    x = (x_or_iterate.point if isinstance(x_or_iterate, ActiveIterate)
         else np.asarray(x_or_iterate, dtype=float))
    dnorm = np.linalg.norm(d)
    if dnorm == 0.0:
        raise ValueError("d must be nonzero")
    pi = region.tangent_projection_norm(x, g)
    if pi <= _STATIONARY_PI_TOL:
        return 1.0
    return float(g @ d) / (pi * dnorm)
