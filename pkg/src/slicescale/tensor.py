"""Sparse nonnegative d-mode tensors, target slice sums and scaling vectors.

Modes and indices are 0-based throughout the Python API. Only the text file
formats in :mod:`slicescale.io` use 1-based indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    DimensionError,
    IncompatibleTargetsError,
    ScalingOverflowError,
)

DEFAULT_EXPONENT_CAP = 700.0
DEFAULT_COMPAT_RTOL = 1e-9


def _frozen(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SparseTensor:
    """Nonnegative d-mode tensor stored in sorted coordinate (COO) form.

    Zero entries are represented by absence. Every stored value is strictly
    positive, every index tuple is unique, and rows of ``indices`` are sorted
    lexicographically.

    Parameters
    ----------
    dims : sequence of int
        Mode sizes ``(m_1, ..., m_d)``.
    indices : array_like of int, shape (nnz, d)
        0-based index tuples of the stored entries.
    values : array_like of float, shape (nnz,)
        Strictly positive entry values.
    """

    dims: tuple
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dims = tuple(int(m) for m in self.dims)
        if len(dims) < 1 or any(m < 1 for m in dims):
            raise DimensionError(f"dims must be positive integers, got {self.dims!r}")
        d = len(dims)
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.size == 0:
            idx = idx.reshape(0, d)
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if idx.ndim != 2 or idx.shape[1] != d:
            raise DimensionError(f"indices must have shape (nnz, {d}), got {idx.shape}")
        if idx.shape[0] != vals.shape[0]:
            raise DimensionError("indices and values have different lengths")
        if np.any(idx < 0) or np.any(idx >= np.array(dims)):
            raise DimensionError("index out of range for dims")
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
            raise ValueError("stored values must be finite and strictly positive")

        if idx.shape[0] > 1:
            order = np.lexsort(idx.T[::-1])
            idx = idx[order]
            vals = vals[order]
            dup = np.all(idx[1:] == idx[:-1], axis=1)
            if np.any(dup):
                first = tuple(int(i) for i in idx[1:][dup][0])
                raise ValueError(f"duplicate index tuple {first}")

        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "indices", _frozen(idx))
        object.__setattr__(self, "values", _frozen(vals))

    @classmethod
    def from_dense(cls, array) -> "SparseTensor":
        """Build from a dense nonnegative array; zeros become absent entries."""
        a = np.asarray(array, dtype=np.float64)
        if np.any(a < 0):
            raise ValueError("dense array has negative entries")
        idx = np.argwhere(a > 0)
        return cls(a.shape, idx, a[tuple(idx.T)])

    @classmethod
    def from_entries(cls, dims, entries: Iterable) -> "SparseTensor":
        """Build from an iterable of ``(index_tuple, value)`` pairs (0-based)."""
        entries = list(entries)
        d = len(tuple(dims))
        idx = np.array([tuple(e[0]) for e in entries], dtype=np.int64).reshape(-1, d)
        vals = np.array([e[1] for e in entries], dtype=np.float64)
        return cls(dims, idx, vals)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def nnz(self) -> int:
        return int(self.values.shape[0])

    @property
    def offsets(self) -> np.ndarray:
        """Start of each mode's block in the stacked vector of length ``sum(dims)``."""
        return np.concatenate(([0], np.cumsum(self.dims)[:-1])).astype(np.int64)

    def support(self) -> set:
        return {tuple(int(i) for i in row) for row in self.indices}

    def total(self) -> float:
        return float(np.sum(self.values))

    def to_dense(self) -> np.ndarray:
        a = np.zeros(self.dims)
        a[tuple(self.indices.T)] = self.values
        return a

    def with_values(self, values) -> "SparseTensor":
        """Same support, new values (must be aligned with ``indices``)."""
        return SparseTensor(self.dims, self.indices, values)

    def permute_modes(self, order: Sequence[int]) -> "SparseTensor":
        order = list(order)
        return SparseTensor(
            tuple(self.dims[k] for k in order), self.indices[:, order], self.values
        )

    def __eq__(self, other):
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return (
            self.dims == other.dims
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return f"SparseTensor(dims={self.dims}, nnz={self.nnz})"


@dataclass(frozen=True, eq=False)
class TargetSums:
    """Prescribed positive slice-sum vectors, one per mode."""

    vectors: tuple

    def __post_init__(self):
        vecs = tuple(_frozen(np.asarray(v, dtype=np.float64).reshape(-1)) for v in self.vectors)
        if not vecs:
            raise DimensionError("at least one mode is required")
        for k, v in enumerate(vecs):
            if v.size == 0:
                raise DimensionError(f"mode {k} target vector is empty")
            if not np.all(np.isfinite(v)) or np.any(v <= 0):
                raise IncompatibleTargetsError(
                    f"mode {k} target vector has a nonpositive or non-finite component"
                )
        object.__setattr__(self, "vectors", vecs)

    @property
    def dims(self) -> tuple:
        return tuple(v.size for v in self.vectors)

    @property
    def ndim(self) -> int:
        return len(self.vectors)

    def totals(self) -> np.ndarray:
        return np.array([np.sum(v) for v in self.vectors])

    def stacked(self) -> np.ndarray:
        return np.concatenate(self.vectors)

    def scaled(self, factor: float) -> "TargetSums":
        return TargetSums(tuple(v * factor for v in self.vectors))

    def permute_modes(self, order: Sequence[int]) -> "TargetSums":
        return TargetSums(tuple(self.vectors[k] for k in order))

    def __getitem__(self, k):
        return self.vectors[k]

    def __len__(self):
        return len(self.vectors)

    def __eq__(self, other):
        if not isinstance(other, TargetSums):
            return NotImplemented
        return len(self) == len(other) and all(
            np.array_equal(a, b) for a, b in zip(self.vectors, other.vectors)
        )

    def __repr__(self):
        return f"TargetSums(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class ScalingVectors:
    """Log-domain mode vectors ``x_1, ..., x_d``; stacked they form ``y``."""

    vectors: tuple

    def __post_init__(self):
        vecs = tuple(_frozen(np.asarray(v, dtype=np.float64).reshape(-1)) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)

    @classmethod
    def zeros(cls, dims) -> "ScalingVectors":
        return cls(tuple(np.zeros(m) for m in dims))

    @classmethod
    def from_stacked(cls, y, dims) -> "ScalingVectors":
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        if y.size != sum(dims):
            raise DimensionError(f"stacked length {y.size} != sum(dims) = {sum(dims)}")
        cuts = np.cumsum(dims)[:-1]
        return cls(tuple(np.split(y, cuts)))

    @property
    def dims(self) -> tuple:
        return tuple(v.size for v in self.vectors)

    def stacked(self) -> np.ndarray:
        return np.concatenate(self.vectors)

    def __add__(self, other):
        if not isinstance(other, ScalingVectors):
            return NotImplemented
        if self.dims != other.dims:
            raise DimensionError("cannot add scaling vectors with different dims")
        return ScalingVectors(tuple(a + b for a, b in zip(self.vectors, other.vectors)))

    def __getitem__(self, k):
        return self.vectors[k]

    def __len__(self):
        return len(self.vectors)

    def __repr__(self):
        return f"ScalingVectors(dims={self.dims})"


def _check_mode(T: SparseTensor, k: int):
    if not 0 <= k < T.ndim:
        raise IndexError(f"mode {k} out of range for a {T.ndim}-mode tensor")


def slice_sums(T: SparseTensor, k: int) -> np.ndarray:
    """Sums of the entries in every slice of mode ``k``.

    Accumulation runs over entries in sorted order, so the result is
    reproducible bit for bit.
    """
    _check_mode(T, k)
    return np.bincount(T.indices[:, k], weights=T.values, minlength=T.dims[k])


def all_slice_sums(T: SparseTensor) -> list:
    return [slice_sums(T, k) for k in range(T.ndim)]


def validate_no_zero_slice(T: SparseTensor) -> list:
    """Return every ``(mode, index)`` pair whose slice has no stored entry.

    An empty list means the tensor has no zero slice.
    """
    bad = []
    for k in range(T.ndim):
        hit = np.bincount(T.indices[:, k], minlength=T.dims[k])
        bad.extend((k, int(i)) for i in np.flatnonzero(hit == 0))
    return bad


def check_compatibility(s: TargetSums, rel_tol: float = DEFAULT_COMPAT_RTOL):
    """Check that all mode totals of ``s`` agree.

    Returns
    -------
    ok : bool
    totals : numpy.ndarray
        Per-mode totals, useful for a mismatch message.
    """
    totals = s.totals()
    ok = bool(totals.max() - totals.min() <= rel_tol * totals.max())
    return ok, totals


def require_compatible(s: TargetSums, rel_tol: float = DEFAULT_COMPAT_RTOL):
    ok, totals = check_compatibility(s, rel_tol)
    if not ok:
        raise IncompatibleTargetsError(
            "mode totals differ: " + ", ".join(f"{t:.17g}" for t in totals)
        )


def same_zero_pattern(A: SparseTensor, B: SparseTensor) -> bool:
    if A.dims != B.dims:
        raise DimensionError(f"dims differ: {A.dims} vs {B.dims}")
    return np.array_equal(A.indices, B.indices)


def _check_scaling_dims(T: SparseTensor, x):
    if tuple(x.dims) != T.dims:
        raise DimensionError(f"scaling dims {x.dims} do not match tensor dims {T.dims}")


def exponent_sums(T: SparseTensor, x: ScalingVectors) -> np.ndarray:
    """``x_{1,i_1} + ... + x_{d,i_d}`` for every stored entry."""
    _check_scaling_dims(T, x)
    out = np.zeros(T.nnz)
    for k in range(T.ndim):
        out += x.vectors[k][T.indices[:, k]]
    return out


def apply_scaling(
    B: SparseTensor, x: ScalingVectors, exponent_cap: float = DEFAULT_EXPONENT_CAP
) -> SparseTensor:
    """Diagonally scale ``B``: each entry times ``exp`` of its exponent sum.

    Raises
    ------
    ScalingOverflowError
        If any exponent sum has magnitude above ``exponent_cap``.
    """
    e = exponent_sums(B, x)
    if e.size and np.max(np.abs(e)) > exponent_cap:
        raise ScalingOverflowError(
            f"exponent sum {np.max(np.abs(e)):.6g} exceeds cap {exponent_cap:g}"
        )
    return B.with_values(B.values * np.exp(e))


def residual(A: SparseTensor, s: TargetSums) -> float:
    """Largest relative slice-sum mismatch ``|sum - target| / target``."""
    if A.dims != s.dims:
        raise DimensionError(f"dims differ: {A.dims} vs {s.dims}")
    worst = 0.0
    for k in range(A.ndim):
        r = np.abs(slice_sums(A, k) - s.vectors[k]) / s.vectors[k]
        worst = max(worst, float(np.max(r)))
    return worst
