"""Deterministic random numbers for reproducible experiment traces.

Benchmark traces must be reproducible from a single integer seed without
depending on the internals of any third-party generator, so the algorithm is
fully spelled out here: the integer stream is SplitMix64 (Steele, Lea & Flood,
"Fast splittable pseudorandom number generators", OOPSLA 2014), uniform
doubles take the top 53 bits, gaussians use Box-Muller and exponentials use
inversion.  SplitMix64 is counter-based (output ``i`` is a hash of
``seed + (i+1)*GAMMA`` mod 2^64), which makes batch generation a vectorized
numpy computation.
"""

from __future__ import annotations

import math

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """SplitMix64 stream with scalar and vectorized draws."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def spawn(self, key: int) -> "SplitMix64":
        """Independent child stream; child seed = mix(seed + (key+1)*GAMMA)."""
        with np.errstate(over="ignore"):
            child = _mix(self._seed + np.uint64((key + 1)) * _GAMMA)
        return SplitMix64(int(child))

    def uint64(self, size: int | None = None):
        n = 1 if size is None else int(size)
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            out = _mix(self._seed + idx * _GAMMA)
        return int(out[0]) if size is None else out

    def uniform(self, size: int | None = None):
        """Uniform doubles in [0, 1), from the top 53 bits."""
        bits = self.uint64(1 if size is None else size)
        bits = np.asarray(bits, dtype=np.uint64).reshape(-1)
        u = (bits >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)
        return float(u[0]) if size is None else u

    def open_uniform(self, size: int | None = None):
        """Uniform doubles in (0, 1], safe as a log argument."""
        bits = self.uint64(1 if size is None else size)
        bits = np.asarray(bits, dtype=np.uint64).reshape(-1)
        u = ((bits >> np.uint64(11)).astype(np.float64) + 1.0) * (2.0 ** -53)
        return float(u[0]) if size is None else u

    def normal(self, size: int | None = None):
        """Standard gaussians via Box-Muller on (open_uniform, uniform) pairs."""
        n = 1 if size is None else int(size)
        pairs = (n + 1) // 2
        u1 = self.open_uniform(pairs)
        u2 = self.uniform(pairs)
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * math.pi * u2
        z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:n]
        return float(z[0]) if size is None else z

    def exponential(self, size: int | None = None):
        """Unit exponentials by inversion, -log(U) with U in (0, 1]."""
        u = self.open_uniform(1 if size is None else size)
        e = -np.log(np.atleast_1d(u))
        return float(e[0]) if size is None else e

    def randint(self, n: int) -> int:
        """Integer in [0, n) by rejection-free modulo (n is desk-scale small)."""
        return int(self.uint64() % np.uint64(n))

    def dirichlet(self, size: int) -> np.ndarray:
        """Flat Dirichlet weights: normalized unit exponentials."""
        e = self.exponential(size)
        return e / e.sum()
