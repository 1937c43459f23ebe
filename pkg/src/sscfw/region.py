"""Polytope feasible sets: linear minimization, faces, feasible steps, cones.

A :class:`Region` carries a V-representation (atoms) and, for the built-in
kinds, a matching H-representation.  Cone computations (minimal face, normal
cone generators, tangent projections, maximal feasible steps) require the
halfspace data; a bare V-representation supports only ``lmo``, ``fw_gap`` and
the diameter.  The simplex equality constraint is stored as two opposing
halfspaces so normal-cone generators stay a plain list of constraint normals.

Coordinates are O(1) on every built-in region, so feasibility and activity
use a fixed absolute tolerance of 1e-10.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

FEASIBILITY_TOL = 1e-10
NNLS_DUAL_TOL = 1e-12

__all__ = [
    "AtomSet",
    "FaceDescriptor",
    "Region",
    "simplex",
    "hypercube",
    "l1_ball",
    "from_atoms",
    "nnls",
]


class AtomSet:
    """Finite set of generating points (rows of ``atoms``) of a polytope."""

    def __init__(self, atoms):
        atoms = np.atleast_2d(np.asarray(atoms, dtype=float))
        if atoms.size == 0:
            raise ValueError("an atom set needs at least one atom")
        self.atoms = atoms
        self.m, self.n = atoms.shape
        self._diameter = None

    @property
    def diameter(self) -> float:
        """Max pairwise Euclidean distance (exact for V-rep polytopes)."""
        if self._diameter is None:
            diffs = self.atoms[:, None, :] - self.atoms[None, :, :]
            self._diameter = float(np.sqrt((diffs ** 2).sum(axis=-1)).max())
        return self._diameter

    def __len__(self) -> int:
        return self.m


@dataclass
class FaceDescriptor:
    """Minimal face of a point: tight constraints, atoms on the face, dimension."""

    active_constraint_indices: tuple
    face_atoms: tuple
    dim: int


class Region:
    """Compact convex polytope given by atoms plus optional halfspaces.

    ``halfspaces`` is a pair of arrays ``(A, b)`` with the polytope contained
    in ``{x : A x <= b}`` row-wise.
    """

    def __init__(self, kind: str, atom_set: AtomSet, halfspaces=None, params=None):
        self.kind = kind
        self.atom_set = atom_set
        self.params = dict(params or {})
        if halfspaces is None:
            self.A_ub = None
            self.b_ub = None
        else:
            A, b = halfspaces
            self.A_ub = np.asarray(A, dtype=float)
            self.b_ub = np.asarray(b, dtype=float)
            if self.A_ub.shape != (self.b_ub.shape[0], self.n):
                raise ValueError("halfspace shapes do not match the ambient dimension")
            slack = self.b_ub[:, None] - self.A_ub @ self.atom_set.atoms.T
            if slack.min() < -FEASIBILITY_TOL:
                raise ValueError("an atom violates the halfspace description")

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return self.atom_set.n

    @property
    def atoms(self) -> np.ndarray:
        return self.atom_set.atoms

    @property
    def diameter(self) -> float:
        return self.atom_set.diameter

    def atom(self, index: int) -> np.ndarray:
        return self.atom_set.atoms[index]

    @property
    def has_halfspaces(self) -> bool:
        return self.A_ub is not None

    def fingerprint(self) -> str:
        items = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind}[{items or f'n={self.n}'};atoms={self.atom_set.m}]"

    def _require_halfspaces(self, opname: str):
        if self.A_ub is None:
            raise NotImplementedError(
                f"{opname} needs halfspace data; this region only has a V-representation"
            )

    def _check_vector(self, v, name="vector") -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f"{name} has length {v.shape}, expected ({self.n},)")
        return v

    # -- membership --------------------------------------------------------

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        self._require_halfspaces("contains")
        x = self._check_vector(x, "x")
        return bool((self.A_ub @ x - self.b_ub).max() <= tol)

    def _check_feasible(self, x) -> np.ndarray:
        x = self._check_vector(x, "x")
        if not self.contains(x):
            worst = float((self.A_ub @ x - self.b_ub).max())
            raise ValueError(f"point is infeasible (worst constraint violation {worst:.3e})")
        return x

    # -- operations ----------------------------------------------------------

    def lmo(self, g) -> int:
        """Index of an atom attaining ``max_a <a, g>`` (ties: lowest index)."""
        g = self._check_vector(g, "g")
        return int(np.argmax(self.atom_set.atoms @ g))

    def minimal_face(self, x) -> FaceDescriptor:
        """Minimal face containing feasible ``x``: tight constraints and their atoms."""
        self._require_halfspaces("minimal_face")
        x = self._check_feasible(x)
        slack = self.b_ub - self.A_ub @ x
        active = np.flatnonzero(slack <= FEASIBILITY_TOL)
        atom_slack = self.b_ub[active, None] - self.A_ub[active] @ self.atom_set.atoms.T
        if active.size:
            on_face = np.flatnonzero(np.abs(atom_slack).max(axis=0) <= FEASIBILITY_TOL)
        else:
            on_face = np.arange(self.atom_set.m)
        if on_face.size == 0:
            raise ValueError("no atoms on the minimal face; atom set does not cover a vertex")
        pts = self.atom_set.atoms[on_face]
        dim = int(np.linalg.matrix_rank(pts - pts[0])) if len(pts) > 1 else 0
        return FaceDescriptor(tuple(int(i) for i in active), tuple(int(i) for i in on_face), dim)

    def max_feasible_step(self, x, d) -> float:
        """max{alpha >= 0 : x + alpha d feasible}; inf when no constraint blocks."""
        self._require_halfspaces("max_feasible_step")
        x = self._check_feasible(x)
        d = self._check_vector(d, "d")
        dnorm = np.linalg.norm(d)
        if dnorm == 0.0:
            raise ValueError("d must be nonzero")
        rate = self.A_ub @ d
        slack = np.maximum(self.b_ub - self.A_ub @ x, 0.0)
        # Directions built inside the affine hull leave equality-pair rows at
        # roundoff scale; those rows must not truncate the step.
        blocking = rate > 1e-12 * max(1.0, dnorm)
        if not blocking.any():
            return np.inf
        return float((slack[blocking] / rate[blocking]).min())

    def normal_cone_generators(self, x) -> np.ndarray:
        """Normals of the constraints active at ``x`` (conic hull = normal cone)."""
        self._require_halfspaces("normal_cone_generators")
        x = self._check_feasible(x)
        slack = self.b_ub - self.A_ub @ x
        return self.A_ub[slack <= FEASIBILITY_TOL].copy()

    def tangent_projection_norm(self, x, g) -> float:
        """Stationarity measure ||pi(T(x), g)|| = dist(g, normal cone at x)."""
        g = self._check_vector(g, "g")
        gens = self.normal_cone_generators(x)
        if gens.shape[0] == 0:
            return float(np.linalg.norm(g))
        _, rnorm = nnls(gens.T, g)
        return rnorm

    def fw_gap(self, x, neg_grad) -> float:
        """max_a <neg_grad, a - x> (raw value; negative at stationary points)."""
        x = self._check_vector(x, "x")
        neg_grad = self._check_vector(neg_grad, "neg_grad")
        return float((self.atom_set.atoms @ neg_grad).max() - neg_grad @ x)


# -- built-in constructors ---------------------------------------------------


def simplex(n: int) -> Region:
    """Standard simplex conv{e_1, ..., e_n} in R^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    atoms = np.eye(n)
    ones = np.ones(n)
    A = np.vstack([-np.eye(n), ones, -ones])
    b = np.concatenate([np.zeros(n), [1.0, -1.0]])
    return Region("simplex", AtomSet(atoms), (A, b), {"n": n})


def hypercube(n: int) -> Region:
    """Unit cube [0, 1]^n with all 2^n vertices as atoms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    atoms = np.array(list(itertools.product((0.0, 1.0), repeat=n)))
    A = np.vstack([np.eye(n), -np.eye(n)])
    b = np.concatenate([np.ones(n), np.zeros(n)])
    return Region("hypercube", AtomSet(atoms), (A, b), {"n": n})


def l1_ball(n: int, radius: float = 1.0) -> Region:
    """Cross-polytope {||x||_1 <= radius} with atoms +-radius * e_i."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n > 16:
        raise ValueError("l1 ball halfspace description is limited to n <= 16")
    atoms = np.vstack([radius * np.eye(n), -radius * np.eye(n)])
    A = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    b = np.full(2 ** n, float(radius))
    return Region("l1ball", AtomSet(atoms), (A, b), {"n": n, "radius": radius})


def from_atoms(atoms, halfspaces=None) -> Region:
    """Generic V-rep region; cone operations work only when halfspaces are given."""
    return Region("generic", AtomSet(atoms), halfspaces, {})


# -- nonnegative least squares ------------------------------------------------


def nnls(A, b, dual_tol: float = NNLS_DUAL_TOL, max_iter: int | None = None):
    """Lawson-Hanson active-set solve of min ||A lam - b|| s.t. lam >= 0.

    Returns ``(lam, residual_norm)``.  The iteration cap (default
    ``100 * n_columns``) signals ill-conditioned generator sets by raising
    RuntimeError.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise ValueError("nnls expects A (m, k) and b (m,)")
    k = A.shape[1]
    if max_iter is None:
        max_iter = 100 * k
    lam = np.zeros(k)
    passive = np.zeros(k, dtype=bool)
    resid = b.copy()
    w = A.T @ resid
    iters = 0
    while True:
        inactive = ~passive
        if not inactive.any() or w[inactive].max() <= dual_tol:
            break
        iters += 1
        if iters > max_iter:
            raise RuntimeError("nnls failed to converge within the iteration cap")
        cand = np.where(inactive, w, -np.inf)
        passive[int(np.argmax(cand))] = True
        while True:
            z = np.zeros(k)
            sol, *_ = np.linalg.lstsq(A[:, passive], b, rcond=None)
            z[passive] = sol
            if sol.size == 0 or sol.min() > 0.0:
                lam = z
                break
            iters += 1
            if iters > max_iter:
                raise RuntimeError("nnls failed to converge within the iteration cap")
            drop = passive & (z <= 0.0)
            ratios = lam[drop] / (lam[drop] - z[drop])
            step = ratios.min()
            lam = lam + step * (z - lam)
            passive &= lam > 1e-14
            lam[~passive] = 0.0
        resid = b - A @ lam
        w = A.T @ resid
    return lam, float(np.linalg.norm(resid))
