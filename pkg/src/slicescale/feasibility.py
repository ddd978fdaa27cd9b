"""Decide whether a tensor can be diagonally scaled to the target slice sums.

The question is a homogeneous linear program: ``B`` is scalable to ``s`` iff
every ``y`` with

* nonpositive exponent sum on each support tuple, and
* ``s_k . x_k = 0`` for each mode

has exponent sum exactly zero on the support. We minimize the total support
exponent sum under those constraints plus the box ``-1 <= y <= 1``; a
negative optimum gives a violating direction, which is returned as a
certificate of infeasibility.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, SolverError
from .maxflow import pattern_feasible_maxflow
from .simplex import DEFAULT_MAX_PIVOTS, bounded_simplex
from .subspace import SubspaceFrame, build_frame, incidence_matrix
from .tensor import ScalingVectors, SparseTensor, TargetSums, exponent_sums

INFEASIBLE_THRESHOLD = -1e-6
SUPPORT_SUM_TOL = 1e-9
EQUALITY_RTOL = 1e-9


@dataclass
class FeasibilityReport:
    feasible: bool
    certificate: ScalingVectors | None = None
    objective_at_certificate: float = 0.0
    lp_optimum: float = 0.0
    pivots: int = 0
    frame: SubspaceFrame | None = field(default=None, repr=False)

    @property
    def verdict(self) -> str:
        return "FEASIBLE" if self.feasible else "INFEASIBLE"

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "objective_at_certificate": self.objective_at_certificate,
            "lp_optimum": self.lp_optimum,
            "pivots": self.pivots,
            "certificate": None,
        }
        if self.certificate is not None:
            out["certificate"] = [v.tolist() for v in self.certificate.vectors]
        return out


def check_scalability(
    B: SparseTensor,
    s: TargetSums,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
    frame: SubspaceFrame | None = None,
) -> FeasibilityReport:
    """Decide scalability of ``B`` to ``s`` with an exact LP.

    Raises
    ------
    ZeroSliceError, IncompatibleTargetsError
        On invalid input (via :func:`build_frame`).
    SolverError
        If the simplex hits ``max_pivots`` or returns an inconsistent answer.
    """
    if frame is None:
        frame = build_frame(B, s)
    Q = frame.basis_U
    u = Q.shape[1]
    if u == 0:
        return FeasibilityReport(True, frame=frame)

    # Optimize over U-coordinates c (y = Q c), split c = c_plus - c_minus.
    MQ = incidence_matrix(B) @ Q
    G = np.vstack([MQ, Q, -Q])
    rhs = np.concatenate([np.zeros(B.nnz), np.ones(2 * frame.n)])
    obj = MQ.sum(axis=0)
    res = bounded_simplex(
        np.concatenate([obj, -obj]),
        np.hstack([G, -G]),
        rhs,
        np.inf,
        max_pivots=max_pivots,
    )
    if res.status != "optimal":
        raise SolverError("feasibility LP reported unbounded despite the box")
    if res.fun >= INFEASIBLE_THRESHOLD:
        return FeasibilityReport(True, lp_optimum=res.fun, pivots=res.pivots, frame=frame)

    y = Q @ (res.x[:u] - res.x[u:])
    y /= np.max(np.abs(y))
    cert = ScalingVectors.from_stacked(y, B.dims)
    total = float(np.sum(exponent_sums(B, cert)))
    if not verify_certificate(B, s, cert):
        raise SolverError(
            f"LP optimum {res.fun:.3g} is negative but the certificate failed verification"
        )
    return FeasibilityReport(False, cert, total, res.fun, res.pivots, frame)


def verify_certificate(B: SparseTensor, s: TargetSums, y) -> bool:
    """True iff ``y`` witnesses that ``B`` cannot be scaled to ``s``.

    Checks nonpositive support exponent sums (up to 1e-9), the per-mode
    orthogonality ``s_k . x_k = 0`` (relative 1e-9), and a strictly negative
    sum (below -1e-6) on some support tuple and in total.
    """
    if not isinstance(y, ScalingVectors):
        y = ScalingVectors.from_stacked(y, B.dims)
    if y.dims != B.dims or s.dims != B.dims:
        raise DimensionError("certificate, tensor and targets dims must agree")
    e = exponent_sums(B, y)
    if not np.all(np.isfinite(e)) or np.any(e > SUPPORT_SUM_TOL):
        return False
    for sk, xk in zip(s.vectors, y.vectors):
        if abs(sk @ xk) > EQUALITY_RTOL * np.linalg.norm(sk) * np.linalg.norm(xk):
            return False
    return bool(np.min(e) < INFEASIBLE_THRESHOLD and np.sum(e) < INFEASIBLE_THRESHOLD)


def maxflow_verdict(B: SparseTensor, s: TargetSums) -> bool:
    """Matrix-only cross-check: strict-support transportation feasibility."""
    return pattern_feasible_maxflow(map(tuple, B.indices), s)
