"""Cyclic proportional fitting (generalized Sinkhorn) for d-mode tensors."""
from __future__ import annotations

import logging

import numpy as np

from .exceptions import DimensionError, SolverError, ZeroSliceError
from .options import ScalingResult, SolverOptions, Status, TraceEntry
from .tensor import (
    ScalingVectors,
    SparseTensor,
    TargetSums,
    apply_scaling,
    require_compatible,
    residual,
    validate_no_zero_slice,
)

log = logging.getLogger(__name__)


def sinkhorn_scale(
    B: SparseTensor,
    s: TargetSums,
    opts: SolverOptions | None = None,
    *,
    callback=None,
) -> ScalingResult:
    """Scale ``B`` towards slice sums ``s`` by cyclic proportional fitting.

    One sweep visits modes 0..d-1 in order and rescales every slice of the
    current mode to its target. The factors are kept as logarithms in the
    scaling vectors, and the current tensor is always recomputed as
    ``apply_scaling(B, scaling)``.

    ``opts.max_iters`` counts sweeps. The run is declared diverged once a
    log-factor exceeds ``opts.exponent_cap`` in magnitude.

    ``callback(mode, tensor)``, if given, is called after every mode update.
    """
    opts = opts or SolverOptions()
    if B.dims != s.dims:
        raise DimensionError(f"tensor dims {B.dims} != target dims {s.dims}")
    bad = validate_no_zero_slice(B)
    if bad:
        raise ZeroSliceError(bad)
    require_compatible(s)

    d = B.ndim
    logs = [np.zeros(m) for m in B.dims]
    # exponent sum of every entry, updated in place as factors accumulate
    expo = np.zeros(B.nnz)
    A = B
    r = residual(A, s)
    trace = [TraceEntry(0, A.total(), r, 1.0)]
    status = Status.MAX_ITERS
    sweeps = 0

    while r > opts.residual_tol and sweeps < opts.max_iters:
        for k in range(d):
            idx = B.indices[:, k]
            current = np.bincount(idx, weights=A.values, minlength=B.dims[k])
            if np.any(current <= 0):
                raise SolverError(f"zero slice sum encountered in mode {k}")
            delta = np.log(s.vectors[k]) - np.log(current)
            logs[k] += delta
            expo += delta[idx]
            if np.max(np.abs(logs[k])) > opts.exponent_cap or np.max(np.abs(expo)) > opts.exponent_cap:
                status = Status.DIVERGED
                break
            A = B.with_values(B.values * np.exp(expo))
            if callback is not None:
                callback(k, A)
        if status is Status.DIVERGED:
            break
        sweeps += 1
        r = residual(A, s)
        trace.append(TraceEntry(sweeps, A.total(), r, 1.0))
        log.debug("sinkhorn sweep=%d residual=%.3e", sweeps, r)

    if r <= opts.residual_tol:
        status = Status.CONVERGED
    if status is Status.DIVERGED:
        log.info("sinkhorn: log-factor exceeded %g after %d sweeps", opts.exponent_cap, sweeps)
        # keep the last state whose exponents respected the cap
        logs[k] -= delta
    x = ScalingVectors(tuple(logs))
    A = apply_scaling(B, x, opts.exponent_cap)
    return ScalingResult(
        scaling=x,
        scaled_tensor=A,
        residual=residual(A, s),
        iterations=sweeps,
        status=status,
        objective_trace=trace,
        method="sinkhorn",
    )
