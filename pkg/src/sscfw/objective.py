"""Smooth objectives with exact gradient-Lipschitz constants.

The built-in families are quadratics with a prescribed spectrum, so every
constant (L, mu, minimizers) is known exactly and rate inequalities can be
checked without estimation error.  L is always supplied by the objective;
nothing is backtracked at solve time.
"""

from __future__ import annotations

import numpy as np

from .rng import SplitMix64

__all__ = [
    "SmoothObjective",
    "QuadraticObjective",
    "power_iteration_radius",
    "sc_quadratic",
    "indefinite_quadratic",
    "distance_squared",
]


class SmoothObjective:
    """Value/gradient pair with a known Lipschitz constant for the gradient.

    ``gradient_calls`` counts gradient evaluations so solvers can assert
    their oracle-call budget.  Values and gradients themselves are pure.
    """

    def __init__(self, value_fn, gradient_fn, lipschitz, strong_mu=None,
                 reference_point=None, reference_value=None):
        if lipschitz <= 0:
            raise ValueError("lipschitz must be positive")
        self._value_fn = value_fn
        self._gradient_fn = gradient_fn
        self.lipschitz = float(lipschitz)
        self.strong_mu = None if strong_mu is None else float(strong_mu)
        self.reference_point = None if reference_point is None else np.asarray(reference_point, float)
        self.reference_value = None if reference_value is None else float(reference_value)
        self.gradient_calls = 0

    def value(self, x) -> float:
        return float(self._value_fn(np.asarray(x, dtype=float)))

    def gradient(self, x) -> np.ndarray:
        self.gradient_calls += 1
        return np.asarray(self._gradient_fn(np.asarray(x, dtype=float)), dtype=float)

    def reset_gradient_counter(self):
        self.gradient_calls = 0

    def kl_residual(self, region, x) -> float:
        """pi_x(-grad f(x)) - sqrt(2 mu) (f(x) - f*)_+^(1/2).

        Nonnegative exactly when the gradient-projection form of the KL
        inequality holds at ``x``.  Requires ``strong_mu`` and
        ``reference_value``.
        """
        if self.strong_mu is None or self.reference_value is None:
            raise ValueError("kl_residual needs strong_mu and reference_value")
        x = np.asarray(x, dtype=float)
        pi = region.tangent_projection_norm(x, -self.gradient(x))
        gap = max(0.0, self.value(x) - self.reference_value)
        return pi - np.sqrt(2.0 * self.strong_mu) * np.sqrt(gap)


class QuadraticObjective(SmoothObjective):
    """f(x) = <x, Q x>/2 + <b, x> with symmetric Q.

    When constants are not passed in, L is the spectral radius of Q computed
    by power iteration (1e-10 relative residual).
    """

    def __init__(self, Q, b, lipschitz=None, strong_mu=None,
                 reference_point=None, reference_value=None):
        Q = np.asarray(Q, dtype=float)
        b = np.asarray(b, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or b.shape != (Q.shape[0],):
            raise ValueError("Q must be square and b must match its size")
        if not np.allclose(Q, Q.T, atol=1e-12):
            raise ValueError("Q must be symmetric")
        self.Q = Q
        self.b = b
        if lipschitz is None:
            lipschitz = power_iteration_radius(Q)
        super().__init__(
            value_fn=lambda x: 0.5 * x @ Q @ x + b @ x,
            gradient_fn=lambda x: Q @ x + b,
            lipschitz=lipschitz,
            strong_mu=strong_mu,
            reference_point=reference_point,
            reference_value=reference_value,
        )

    def unconstrained_minimizer(self) -> np.ndarray:
        """-Q^{-1} b; meaningful when Q is positive definite."""
        return np.linalg.solve(self.Q, -self.b)

    def exact_linesearch_step(self, x, d) -> float:
        """argmin_{alpha >= 0} f(x + alpha d); inf sentinel on non-convex rays."""
        x = np.asarray(x, dtype=float)
        d = np.asarray(d, dtype=float)
        if np.linalg.norm(d) == 0.0:
            raise ValueError("d must be nonzero")
        curvature = d @ self.Q @ d
        if curvature <= 0.0:
            return np.inf
        slope = -(self.Q @ x + self.b) @ d
        return max(0.0, float(slope / curvature))

    def fingerprint(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(self.Q.tobytes())
        h.update(self.b.tobytes())
        return h.hexdigest()[:16]


def power_iteration_radius(Q, rel_tol: float = 1e-10, max_iter: int = 500000, seed: int = 7) -> float:
    """Spectral radius (largest |eigenvalue|) of symmetric Q by power iteration.

    Iterates with Q^2 so that +-lambda ties (possible for indefinite Q) do
    not stall the iteration; the residual is measured on the Q^2 eigenpair.
    """
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    rng = SplitMix64(seed)
    v = rng.normal(n)
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = Q @ (Q @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        lam2 = float(v @ Q @ (Q @ v))
        if np.linalg.norm(Q @ (Q @ v) - lam2 * v) <= rel_tol * max(lam2, 1e-300):
            return float(np.sqrt(max(lam2, 0.0)))
    raise RuntimeError("power iteration did not reach the requested residual")


def _random_orthogonal(n: int, rng: SplitMix64) -> np.ndarray:
    """Product of n-1 Householder reflectors from the seeded stream."""
    U = np.eye(n)
    for _ in range(max(1, n - 1)):
        v = rng.normal(n)
        norm = np.linalg.norm(v)
        if norm < 1e-12:
            continue
        v = v / norm
        U = U - 2.0 * np.outer(v, v @ U)
    return U


def _conjugated_quadratic(eigenvalues: np.ndarray, rng: SplitMix64) -> np.ndarray:
    U = _random_orthogonal(len(eigenvalues), rng)
    Q = (U * eigenvalues) @ U.T
    return 0.5 * (Q + Q.T)


def sc_quadratic(n: int, mu: float, lipschitz: float, seed: int) -> QuadraticObjective:
    """Strongly convex quadratic with spectrum linspace(mu, L) and a seeded linear term."""
    if not 0 < mu <= lipschitz:
        raise ValueError("need 0 < mu <= L")
    rng = SplitMix64(seed).spawn(101)
    eigs = np.linspace(mu, lipschitz, n)
    Q = _conjugated_quadratic(eigs, rng)
    center = 0.25 + 0.75 * rng.normal(n) / np.sqrt(n)
    b = -Q @ center
    return QuadraticObjective(Q, b, lipschitz=lipschitz, strong_mu=mu)


def indefinite_quadratic(n: int, lipschitz: float, seed: int) -> QuadraticObjective:
    """Indefinite quadratic with spectrum linspace(-0.6 L, L); spectral radius L."""
    if lipschitz <= 0:
        raise ValueError("L must be positive")
    if n < 2:
        raise ValueError("need n >= 2 for an indefinite spectrum")
    rng = SplitMix64(seed).spawn(202)
    eigs = np.linspace(-0.6, 1.0, n) * lipschitz
    Q = _conjugated_quadratic(eigs, rng)
    b = 0.3 * rng.normal(n) / np.sqrt(n)
    return QuadraticObjective(Q, b, lipschitz=lipschitz)


def distance_squared(x_star) -> QuadraticObjective:
    """f(x) = ||x - x*||^2 / 2 (up to a constant), with mu = L = 1."""
    x_star = np.asarray(x_star, dtype=float)
    n = x_star.shape[0]
    obj = QuadraticObjective(
        np.eye(n), -x_star, lipschitz=1.0, strong_mu=1.0, reference_point=x_star
    )
    obj.reference_value = obj.value(x_star)
    return obj
