"""Orthonormal frames for the constraint subspace and its flat directions.

For a tensor ``B`` and targets ``s`` the stacked vectors ``y = (x_1, ..., x_d)``
live in R^n with ``n = sum(dims)``. Three subspaces matter:

* ``U``: vectors with ``s_k . x_k = 0`` for every mode;
* ``V``: vectors of ``U`` whose exponent sum vanishes on every support tuple
  (the objective is constant along them);
* ``Vperp``: the orthogonal complement of ``V`` inside ``U``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, ZeroSliceError
from .linalg import gram_schmidt, nullspace
from .tensor import (
    ScalingVectors,
    SparseTensor,
    TargetSums,
    exponent_sums,
    require_compatible,
    validate_no_zero_slice,
)


@dataclass(frozen=True, eq=False)
class SubspaceFrame:
    n: int
    basis_U: np.ndarray
    basis_V: np.ndarray
    basis_Vperp: np.ndarray
    support: np.ndarray
    dims: tuple

    @property
    def u(self) -> int:
        return self.basis_U.shape[1]

    @property
    def v(self) -> int:
        return self.basis_V.shape[1]

    @property
    def p(self) -> int:
        return self.basis_Vperp.shape[1]

    def basis(self, which: str) -> np.ndarray:
        try:
            return {"U": self.basis_U, "V": self.basis_V, "Vperp": self.basis_Vperp}[which]
        except KeyError:
            raise ValueError(f"which must be 'U', 'V' or 'Vperp', got {which!r}") from None


def target_matrix(s: TargetSums) -> np.ndarray:
    """The d x n matrix whose k-th row carries ``s_k`` in block k (scaled to unit max)."""
    dims = s.dims
    S = np.zeros((len(dims), sum(dims)))
    off = 0
    for k, v in enumerate(s.vectors):
        S[k, off:off + v.size] = v / np.max(v)
        off += v.size
    return S


def incidence_matrix(B: SparseTensor) -> np.ndarray:
    """One row per support tuple with ones at the stacked positions of its indices."""
    M = np.zeros((B.nnz, sum(B.dims)))
    rows = np.arange(B.nnz)
    for k, off in enumerate(B.offsets):
        M[rows, off + B.indices[:, k]] = 1.0
    return M


def build_frame(B: SparseTensor, s: TargetSums) -> SubspaceFrame:
    """Construct orthonormal bases of ``U``, ``V`` and ``Vperp`` for ``(B, s)``."""
    if B.dims != s.dims:
        raise DimensionError(f"tensor dims {B.dims} != target dims {s.dims}")
    bad = validate_no_zero_slice(B)
    if bad:
        raise ZeroSliceError(bad)
    require_compatible(s)

    n = sum(B.dims)
    S = target_matrix(s)
    QU = nullspace(S)
    QV = nullspace(np.vstack([S, incidence_matrix(B)]))

    p = QU.shape[1] - QV.shape[1]
    if QV.shape[1]:
        projected = QU - QV @ (QV.T @ QU)
        QP = gram_schmidt(projected, drop_tol=1e-8)
        if QP.shape[1] != p:
            # greedy column dropping misjudged the rank; use the complement
            # of V's coordinates inside U instead
            QP = QU @ nullspace(QV.T @ QU)
    else:
        QP = QU.copy()
    for Q in (QU, QV, QP):
        Q.flags.writeable = False
    return SubspaceFrame(n, QU, QV, QP, B.indices, B.dims)


def project_to(frame: SubspaceFrame, y, which: str = "Vperp") -> np.ndarray:
    """Coordinates ``basis.T @ y`` of ``y`` in the selected basis."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size != frame.n:
        raise DimensionError(f"vector length {y.size} != ambient dimension {frame.n}")
    return frame.basis(which).T @ y


def embed(frame: SubspaceFrame, coords, which: str = "Vperp") -> np.ndarray:
    """Ambient vector ``basis @ coords``; right inverse of :func:`project_to`."""
    Q = frame.basis(which)
    coords = np.asarray(coords, dtype=np.float64).reshape(-1)
    if coords.size != Q.shape[1]:
        raise DimensionError(f"expected {Q.shape[1]} coordinates, got {coords.size}")
    return Q @ coords


def max_support_sum(B: SparseTensor, y) -> float:
    """Largest exponent sum over the support of ``B``."""
    if B.nnz == 0:
        raise ValueError("tensor has empty support")
    if not isinstance(y, ScalingVectors):
        y = ScalingVectors.from_stacked(y, B.dims)
    return float(np.max(exponent_sums(B, y)))
