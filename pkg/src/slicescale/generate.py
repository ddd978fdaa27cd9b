"""Seeded generators for feasible and infeasible scaling instances.

All randomness comes from SplitMix64, so a given seed produces the same
instance on every platform:

    state  <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z      <- state
    z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2**64)
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2**64)
    output <- z ^ (z >> 31)

A uniform double in [0, 1) is ``(output >> 11) * 2**-53``.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .exceptions import SliceScaleError
from .maxflow import pattern_feasible_maxflow
from .tensor import SparseTensor, TargetSums, all_slice_sums, validate_no_zero_slice

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MAX_PATTERN_RETRIES = 1000
MAX_INFEASIBLE_DRAWS = 10_000


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def uniforms(self, n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
        return np.array([self.uniform(lo, hi) for _ in range(n)])

    def split(self) -> "SplitMix64":
        """Independent child stream seeded from this one."""
        return SplitMix64(self.next_u64())


def _sample_pattern(rng: SplitMix64, dims, density):
    cells = [c for c in itertools.product(*(range(m) for m in dims)) if rng.random() < density]
    return np.array(cells, dtype=np.int64).reshape(-1, len(dims))


def _pattern_with_full_slices(rng, dims, density):
    for _ in range(MAX_PATTERN_RETRIES):
        idx = _sample_pattern(rng, dims, density)
        ones = SparseTensor(dims, idx, np.ones(len(idx)))
        if not validate_no_zero_slice(ones):
            return idx
    raise SliceScaleError(
        f"no pattern without zero slices after {MAX_PATTERN_RETRIES} draws "
        f"(dims={tuple(dims)}, density={density})"
    )


def _values(rng, n, value_spread):
    if value_spread is None:
        return rng.uniforms(n, 0.5, 1.5)
    # log-uniform over [10**-spread, 10**spread]
    return 10.0 ** rng.uniforms(n, -value_spread, value_spread)


def generate_feasible(dims, density=1.0, seed=0, value_spread=None):
    """Random scalable pair ``(B, s)``.

    A pattern without zero slices is sampled cell by cell with probability
    ``density``; ``s`` is read off a positive tensor on that pattern and
    ``B`` is an independent positive tensor on the same pattern, so ``B``
    can be scaled to ``s``.

    Parameters
    ----------
    dims : sequence of int
    density : float in (0, 1]
    seed : int
    value_spread : float, optional
        If set, entries of ``B`` are log-uniform over
        ``[10**-value_spread, 10**value_spread]`` instead of uniform on
        [0.5, 1.5].
    """
    dims = tuple(int(m) for m in dims)
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = SplitMix64(seed)
    idx = _pattern_with_full_slices(rng, dims, density)
    A = SparseTensor(dims, idx, rng.uniforms(len(idx), 0.5, 1.5))
    s = TargetSums(tuple(all_slice_sums(A)))
    B = SparseTensor(dims, idx, _values(rng, len(idx), value_spread))
    return B, s


def _fallback_infeasible(size):
    # every cell but (0, 0); column 0 needs more than rows 1.. can supply
    dense = np.ones((size, size))
    dense[0, 0] = 0.0
    s1 = np.ones(size)
    s2 = np.full(size, 0.5 / (size - 1))
    s2[0] = size - 0.5
    return SparseTensor.from_dense(dense), TargetSums((s1, s2))


def generate_infeasible_2mode(size, seed=0, density=0.5):
    """Random ``size x size`` pair ``(B, s)`` that cannot be scaled.

    Draws patterns (no zero row or column) and compatible positive sums until
    the strict-support max-flow check rejects one. Falls back to a fixed
    infeasible family after 10 000 draws.
    """
    size = int(size)
    if size < 2:
        raise ValueError("size must be at least 2")
    rng = SplitMix64(seed)
    dims = (size, size)
    for _ in range(MAX_INFEASIBLE_DRAWS):
        idx = _sample_pattern(rng, dims, density)
        if len(idx) == 0:
            continue
        if validate_no_zero_slice(SparseTensor(dims, idx, np.ones(len(idx)))):
            continue
        s1 = rng.uniforms(size, 0.5, 1.5)
        s2 = rng.uniforms(size, 0.5, 1.5)
        s2 *= math.fsum(s1) / math.fsum(s2)
        s = TargetSums((s1, s2))
        if not pattern_feasible_maxflow(map(tuple, idx), s):
            return SparseTensor(dims, idx, rng.uniforms(len(idx), 0.5, 1.5)), s
    return _fallback_infeasible(size)
