"""Options and result containers shared by the Newton and Sinkhorn solvers."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .tensor import ScalingVectors, SparseTensor


class Status(str, enum.Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    MAX_ITERS = "max_iters_exceeded"


@dataclass(frozen=True)
class SolverOptions:
    """Tuning knobs for :func:`newton_scale` and :func:`sinkhorn_scale`.

    ``hessian_ridge`` is added to the reduced Hessian on every step when
    positive; independently of it, a failed factorization is retried once
    with a ridge of ``1e-12 * trace / p``.
    """

    residual_tol: float = 1e-10
    max_iters: int = 100
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    hessian_ridge: float = 0.0
    divergence_norm_cap: float = 1e3
    exponent_cap: float = 700.0
    stall_window: int = 5

    def __post_init__(self):
        if not 0 < self.armijo_c < 1:
            raise ValueError("armijo_c must lie in (0, 1)")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must lie in (0, 1)")
        for name in ("residual_tol", "divergence_norm_cap", "exponent_cap"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iters < 0 or self.hessian_ridge < 0 or self.stall_window < 1:
            raise ValueError("max_iters and hessian_ridge must be nonnegative, stall_window >= 1")

    def replace(self, **changes) -> "SolverOptions":
        return replace(self, **changes)


class TraceEntry(NamedTuple):
    iteration: int
    objective: float
    residual: float
    step: float


@dataclass
class ScalingResult:
    scaling: ScalingVectors
    scaled_tensor: SparseTensor
    residual: float
    iterations: int
    status: Status
    objective_trace: list = field(default_factory=list)
    certificate: object = None  # FeasibilityReport once divergence is confirmed
    multipliers: np.ndarray | None = None
    method: str = ""

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def trace_dict(self) -> dict:
        return {
            "method": self.method,
            "status": self.status.value,
            "iterations": self.iterations,
            "residual": self.residual,
            "trace": [e._asdict() for e in self.objective_trace],
        }
