"""Pyramidal widths and the angle/rate constants derived from them.

``pdirw`` is the exact enumeration of the pyramidal directional width: the
min over valid active sets S (subsets of atoms representing x with strictly
positive weights) of ``max_a <g/||g||, a> - min_{s in S} <g/||g||, s>``.
``pwidth_simplex`` is the closed form for the standard simplex, the only
family where the exact value is known; everywhere else ``pwidth_estimate``
produces a sampled upper bound and is flagged as such.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .rng import SplitMix64

PDIRW_ATOM_CAP = 12
ESTIMATE_ATOM_CAP = 20
_STRICT_WEIGHT_TOL = 1e-10

__all__ = [
    "GeometryBounds",
    "pdirw",
    "pwidth_simplex",
    "pwidth_estimate",
    "rate_constants",
    "simplex_bounds",
    "estimated_bounds",
    "tau_for_method",
]


@dataclass
class GeometryBounds:
    """Pyramidal width of an atom set and the per-variant angle constants."""

    pwidth: float
    diameter: float
    tau_pfw: float
    tau_afw: float
    tau_fd: float
    source: str  # "closed_form" | "sampled_upper_bound"


def _atoms_array(atoms) -> np.ndarray:
    arr = getattr(atoms, "atoms", atoms)
    return np.atleast_2d(np.asarray(arr, dtype=float))


def _proper_weights(sub: np.ndarray, x: np.ndarray):
    """Weights of x over the rows of ``sub`` maximizing the minimum weight.

    Returns None when x is not an affine combination of the rows.  For
    affinely independent rows the weights are unique; otherwise a small LP
    maximizes the minimum weight over the affine solution set.
    """
    k, n = sub.shape
    A = np.vstack([sub.T, np.ones(k)])
    rhs = np.concatenate([x, [1.0]])
    w0, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    if np.linalg.norm(A @ w0 - rhs) > 1e-9:
        return None
    if np.linalg.matrix_rank(A, tol=1e-10) == k:
        return w0
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A_eq = np.hstack([A, np.zeros((n + 1, 1))])
    A_ub = np.hstack([-np.eye(k), np.ones((k, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(k), A_eq=A_eq, b_eq=rhs,
                  bounds=[(None, None)] * (k + 1), method="highs")
    if not res.success:
        return None
    return res.x[:k]


def pdirw(atoms, g, x) -> float:
    """Pyramidal directional width by exhaustive active-set enumeration."""
    arr = _atoms_array(atoms)
    m = arr.shape[0]
    if m > PDIRW_ATOM_CAP:
        raise ValueError(f"pdirw enumerates 2^m subsets; m={m} exceeds the cap {PDIRW_ATOM_CAP}")
    g = np.asarray(g, dtype=float)
    x = np.asarray(x, dtype=float)
    norm_g = np.linalg.norm(g)
    if norm_g == 0.0:
        raise ValueError("g must be nonzero")
    dots = arr @ (g / norm_g)
    max_dot = dots.max()
    best = np.inf
    found = False
    for size in range(1, m + 1):
        for subset in itertools.combinations(range(m), size):
            w = _proper_weights(arr[list(subset)], x)
            if w is None or w.min() <= _STRICT_WEIGHT_TOL:
                continue
            found = True
            best = min(best, max_dot - dots[list(subset)].min())
    if not found:
        raise ValueError("x is not a proper convex combination of any atom subset")
    return float(best)


def pwidth_simplex(n: int) -> float:
    """Exact pyramidal width of conv{e_1, ..., e_n} (equals its width)."""
    if n < 2:
        raise ValueError("need n >= 2")
    if n % 2 == 0:
        return 2.0 * np.sqrt(1.0 / n)
    return 2.0 * np.sqrt(1.0 / (n - 1.0 / n))


class _Candidate:
    """A face T, a support S in T carrying x, and cone weights for g.

    x is the strictly positive combination ``w_x @ atoms[S]`` and the
    functional is ``g = w_g @ (atoms[T] - x)`` with ``w_g >= 0``, so
    ``g in cone(conv(T) - x)`` holds by construction and the value
    ``max_{a in T} <g/||g||, a> - min_{s in S} <g/||g||, s>`` upper-bounds
    the pyramidal width.
    """

    __slots__ = ("face", "support", "w_x", "w_g")

    def __init__(self, face, support, w_x, w_g):
        self.face = list(face)
        self.support = list(support)
        self.w_x = np.asarray(w_x, dtype=float)
        self.w_g = np.asarray(w_g, dtype=float)

    def value(self, arr: np.ndarray):
        if self.w_x.min() <= _STRICT_WEIGHT_TOL or self.w_g.min() < 0.0:
            return None
        face_atoms = arr[self.face]
        x = self.w_x @ arr[self.support]
        g = self.w_g @ (face_atoms - x)
        norm_g = np.linalg.norm(g)
        if norm_g <= 1e-12:
            return None
        dots = face_atoms @ (g / norm_g)
        sup_pos = [self.face.index(s) for s in self.support]
        return float(dots.max() - dots[sup_pos].min())


def _sample_face(arr: np.ndarray, rng: SplitMix64):
    """A genuine face of conv(atoms): the argmax set of a linear functional."""
    m, n = arr.shape
    mode = rng.randint(4)
    if mode == 0:
        return list(range(m))
    c = rng.normal(n)
    if mode == 2:
        c = np.round(c)
    elif mode == 3:
        c = np.round(2.0 * c) / 2.0
    dots = arr @ c
    return [int(i) for i in np.flatnonzero(dots >= dots.max() - 1e-9)]


def _sample_subset(rng: SplitMix64, items: list, size: int) -> list:
    pool = list(items)
    for i in range(size):
        j = i + rng.randint(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return sorted(pool[:size])


def _split_candidates(m: int, cap: int = 4000):
    """Disjoint nonempty (P, N) pairs of atom indices (exhaustive when small)."""
    if 3 ** m <= 3 * cap:
        assignments = itertools.product((0, 1, 2), repeat=m)
    else:
        rng = SplitMix64(99)
        assignments = (tuple(rng.randint(3) for _ in range(m)) for _ in range(cap))
    for assign in assignments:
        pos = [i for i, a in enumerate(assign) if a == 1]
        neg = [i for i, a in enumerate(assign) if a == 2]
        if pos and neg:
            yield pos, neg


def _structured_candidates(arr: np.ndarray):
    """Barycenter-difference functionals evaluated on their own support.

    For S = P u N and x the barycenter of S, the direction
    ``u = bary(P) - bary(N)`` lies in span(S - x); shifting its coefficients
    by a multiple of the barycentric weights makes them nonnegative, which
    realizes u as a member of cone(conv(S) - x).
    """
    m = arr.shape[0]
    for pos, neg in _split_candidates(m):
        support = sorted(pos + neg)
        k = len(support)
        coeff = np.zeros(k)
        for i, s in enumerate(support):
            if s in pos:
                coeff[i] += 1.0 / len(pos)
            if s in neg:
                coeff[i] -= 1.0 / len(neg)
        shift = max(0.0, -coeff.min()) * k + 1.0
        w_g = coeff + shift / k
        yield _Candidate(support, support, np.full(k, 1.0 / k), w_g)
    # vertex-to-vertex rays: S = {i}, g along atom_j - atom_i
    for i in range(m):
        for j in range(m):
            if i != j:
                w_g = np.zeros(2)
                w_g[1] = 1.0
                yield _Candidate([i, j], [i], np.ones(1), w_g)


def pwidth_estimate(atoms, samples: int = 10_000, seed: int = 0) -> float:
    """Sampled upper bound on the pyramidal width of an atom set.

    Every sample is a valid (face, point, functional) triple by construction,
    so the minimum over samples can only overestimate the true width.
    Structured barycenter-split candidates and a multiplicative-perturbation
    polish tighten the bound; on standard simplices the structured candidates
    attain it exactly.
    """
    arr = _atoms_array(atoms)
    m = arr.shape[0]
    if m > ESTIMATE_ATOM_CAP:
        raise ValueError(f"pwidth_estimate is limited to {ESTIMATE_ATOM_CAP} atoms")
    if m < 2:
        raise ValueError("need at least two atoms")
    rng = SplitMix64(seed)
    best = np.inf
    best_cand = None

    def consider(cand: _Candidate):
        nonlocal best, best_cand
        val = cand.value(arr)
        if val is not None and val < best:
            best = val
            best_cand = cand

    for cand in _structured_candidates(arr):
        consider(cand)

    for _ in range(samples):
        face = _sample_face(arr, rng)
        size = 1 + rng.randint(len(face))
        support = _sample_subset(rng, face, size)
        w_x = rng.dirichlet(len(support)) if len(support) > 1 else np.ones(1)
        w_g = rng.exponential(len(face))
        consider(_Candidate(face, support, w_x, w_g))

    if best_cand is not None:
        support, face = best_cand.support, best_cand.face
        w_x, w_g = best_cand.w_x.copy(), best_cand.w_g.copy()
        sigma = 0.5
        while sigma >= 1e-6:
            improved = False
            for _ in range(30):
                wx = w_x * np.exp(sigma * rng.normal(len(support)))
                wx /= wx.sum()
                wg = w_g * np.exp(sigma * rng.normal(len(face)))
                cand = _Candidate(face, support, wx, wg)
                val = cand.value(arr)
                if val is not None and val < best - 1e-15:
                    best, w_x, w_g = val, wx, wg
                    improved = True
            if not improved:
                sigma *= 0.5
    return float(best)


def rate_constants(mu: float, lipschitz: float, tau: float) -> dict:
    """Contraction factors and the step constant for a given angle constant.

    q:          per-outer-step factor of the chained method under KL
    q_gs_short: factor of a plain short (alpha = alpha_bar) step
    q_gs_fw:    factor of a plain full FW step
    K:          step-length constant tau / (L (1 + tau))
    """
    if not 0 < mu <= lipschitz:
        raise ValueError("need 0 < mu <= L")
    if not 0 < tau <= 1:
        raise ValueError("need 0 < tau <= 1")
    ratio = mu / lipschitz
    return {
        "q": 1.0 / (1.0 + ratio * tau ** 2 / (1.0 + tau) ** 2),
        "q_gs_short": 1.0 - ratio * tau ** 2,
        "q_gs_fw": 1.0 / (1.0 + ratio),
        "K": tau / (lipschitz * (1.0 + tau)),
    }


def _bounds_from_pwidth(pwidth: float, diameter: float, source: str) -> GeometryBounds:
    tau_pfw = pwidth / diameter
    return GeometryBounds(
        pwidth=pwidth,
        diameter=diameter,
        tau_pfw=tau_pfw,
        tau_afw=tau_pfw / 2.0,
        tau_fd=tau_pfw / 2.0,
        source=source,
    )


def simplex_bounds(n: int) -> GeometryBounds:
    """Closed-form constants for the standard simplex (atoms = vertices)."""
    return _bounds_from_pwidth(pwidth_simplex(n), np.sqrt(2.0), "closed_form")


def estimated_bounds(atoms, samples: int = 10_000, seed: int = 0) -> GeometryBounds:
    """Sampled-upper-bound constants for a general atom set (atoms = vertices)."""
    arr = _atoms_array(atoms)
    diffs = arr[:, None, :] - arr[None, :, :]
    diameter = float(np.sqrt((diffs ** 2).sum(axis=-1)).max())
    return _bounds_from_pwidth(pwidth_estimate(arr, samples, seed), diameter,
                               "sampled_upper_bound")


def tau_for_method(method: str, bounds: GeometryBounds) -> float:
    """Angle constant of a variant (in-face directions use vertex atoms)."""
    if method == "pfw":
        return bounds.tau_pfw
    if method == "afw":
        return bounds.tau_afw
    if method == "fdfw":
        return bounds.tau_fd
    raise ValueError(f"unknown method {method!r}")
