"""Newton's method for diagonal tensor scaling.

The scaled tensor ``A = B * exp(x_1[i_1] + ... + x_d[i_d])`` with prescribed
slice sums corresponds to the critical point of

    f(y) = sum over the support of b * exp(exponent sum)

restricted to the subspace ``U`` (``s_k . x_k = 0`` per mode). The objective
is constant along ``V`` and strictly convex on ``Vperp``, so we run damped
Newton on ``Vperp`` coordinates. At the minimizer every mode-k slice-sum
vector is ``lam * s_k`` with a common multiplier ``lam``; shifting ``x_1`` by
``-log(lam)`` turns the minimizer into the scaling.
"""
from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from .exceptions import ScalingOverflowError, SolverError
from .feasibility import check_scalability
from .options import ScalingResult, SolverOptions, Status, TraceEntry
from .subspace import SubspaceFrame, build_frame
from .tensor import (
    ScalingVectors,
    SparseTensor,
    TargetSums,
    apply_scaling,
    exponent_sums,
    residual,
    slice_sums,
)

log = logging.getLogger(__name__)


def _as_scaling(B, y):
    if isinstance(y, ScalingVectors):
        return y
    return ScalingVectors.from_stacked(y, B.dims)


def objective(B: SparseTensor, y, exponent_cap: float = 700.0) -> float:
    """``sum b * exp(x_1[i_1] + ... + x_d[i_d])`` over the support of ``B``.

    Raises ``ScalingOverflowError`` when an exponent sum exceeds the cap.
    """
    e = exponent_sums(B, _as_scaling(B, y))
    if np.any(np.isnan(e)):
        raise ValueError("NaN in scaling vector")
    M = float(np.max(e))
    if M > exponent_cap:
        raise ScalingOverflowError(f"exponent sum {M:.6g} exceeds cap {exponent_cap:g}")
    if M > exponent_cap / 2:
        return float(np.exp(M) * np.sum(B.values * np.exp(e - M)))
    return float(np.sum(B.values * np.exp(e)))


def ambient_hessian(A: SparseTensor) -> np.ndarray:
    """Hessian of ``f`` in R^n evaluated where the scaled tensor equals ``A``.

    Entry ``((k, i), (l, j))`` is the sum of the entries of ``A`` whose k-th
    index is i and l-th index is j.
    """
    n = sum(A.dims)
    H = np.zeros((n, n))
    pos = A.indices + A.offsets
    for k in range(A.ndim):
        for l in range(A.ndim):
            np.add.at(H, (pos[:, k], pos[:, l]), A.values)
    return H


def gradient_hessian_reduced(
    B: SparseTensor,
    s: TargetSums,
    frame: SubspaceFrame,
    c,
    exponent_cap: float = 700.0,
):
    """Gradient and Hessian of ``c -> f(basis_Vperp @ c)``.

    The ambient gradient is the stacked slice-sum vector of the scaled
    tensor. ``s`` is accepted for signature symmetry with the solver; the
    Lagrangian gradient is ``grad - basis_Vperp.T @ s.stacked()``.
    """
    Q = frame.basis_Vperp
    y = Q @ np.asarray(c, dtype=np.float64)
    A = apply_scaling(B, ScalingVectors.from_stacked(y, B.dims), exponent_cap)
    g_amb = np.concatenate([slice_sums(A, k) for k in range(A.ndim)])
    H = Q.T @ ambient_hessian(A) @ Q
    return Q.T @ g_amb, 0.5 * (H + H.T)


def solve_kkt_step(H, g, ridge: float = 0.0) -> np.ndarray:
    """Newton step ``delta`` with ``H @ delta = -g`` via Cholesky.

    A failed factorization is retried once with ``mu * I`` added,
    ``mu = 1e-12 * trace(H) / p``.
    """
    H = np.atleast_2d(np.asarray(H, dtype=np.float64))
    g = np.asarray(g, dtype=np.float64).reshape(-1)
    p = g.size
    if H.shape != (p, p):
        raise ValueError(f"Hessian shape {H.shape} does not match gradient length {p}")
    if p == 0:
        return np.zeros(0)
    scale = max(float(np.max(np.abs(H))), np.finfo(float).tiny)
    if np.max(np.abs(H - H.T)) > 1e-12 * scale:
        raise ValueError("Hessian is not symmetric")
    if ridge > 0:
        H = H + ridge * np.eye(p)
    try:
        factor = scipy.linalg.cho_factor(H)
    except np.linalg.LinAlgError:
        mu = 1e-12 * np.trace(H) / p
        try:
            factor = scipy.linalg.cho_factor(H + mu * np.eye(p))
        except np.linalg.LinAlgError as exc:
            raise SolverError("Hessian factorization failed after ridge retry") from exc
    return -scipy.linalg.cho_solve(factor, g)


def _normalized(B, y, s_total, exponent_cap):
    """Shift mode 0 so the scaled tensor's total equals the target total."""
    x = ScalingVectors.from_stacked(y, B.dims)
    A = apply_scaling(B, x, exponent_cap)
    lam = A.total() / s_total
    vecs = list(x.vectors)
    vecs[0] = vecs[0] - np.log(lam)
    x = ScalingVectors(tuple(vecs))
    return x, apply_scaling(B, x, exponent_cap), A


def newton_scale(
    B: SparseTensor,
    s: TargetSums,
    opts: SolverOptions | None = None,
    *,
    start=None,
    seed=None,
    frame: SubspaceFrame | None = None,
) -> ScalingResult:
    """Scale ``B`` to slice sums ``s`` by damped Newton on ``Vperp``.

    Parameters
    ----------
    B : SparseTensor
        Nonnegative tensor without zero slices.
    s : TargetSums
        Positive, compatible targets.
    opts : SolverOptions, optional
    start : array_like, optional
        Initial ``Vperp`` coordinates. Defaults to zero.
    seed : int, optional
        If given (and ``start`` is not), the start coordinates are drawn
        from a standard normal generator with this seed.
    frame : SubspaceFrame, optional
        Precomputed frame for ``(B, s)``.

    Returns
    -------
    ScalingResult
        ``Diverged`` results carry an LP certificate in ``certificate``.
    """
    opts = opts or SolverOptions()
    if frame is None:
        frame = build_frame(B, s)
    cap = opts.exponent_cap
    Q = frame.basis_Vperp
    p = Q.shape[1]

    s_total = float(np.mean(s.totals()))
    # work with targets summing to B's total so exponents stay near zero
    s_work = s.scaled(B.total() / s_total).stacked()
    lag_shift = Q.T @ s_work

    if start is not None:
        c = np.array(start, dtype=np.float64).reshape(-1)
        if c.size != p:
            raise ValueError(f"start has {c.size} coordinates, Vperp has dimension {p}")
    elif seed is not None:
        c = np.random.default_rng(seed).standard_normal(p)
    else:
        c = np.zeros(p)

    def lagrangian(cc):
        y = Q @ cc
        e = exponent_sums(B, ScalingVectors.from_stacked(y, B.dims))
        if np.max(np.abs(e)) > cap:
            # entries would overflow or vanish; reject the point
            raise ScalingOverflowError("exponent sum exceeds cap")
        return objective(B, y, cap) - s_work @ y

    trace = []
    history = []
    lp_report = None
    status = Status.MAX_ITERS
    step = 0.0

    def confirm_infeasible():
        nonlocal lp_report
        if lp_report is None:
            lp_report = check_scalability(B, s, frame=frame)
            log.info("newton: LP confirmation -> %s", lp_report.verdict)
        return not lp_report.feasible

    # reported state if the very first iterate is already out of range
    x, A, _ = _normalized(B, np.zeros(frame.n), s_total, cap)
    r = residual(A, s)

    it = 0
    while True:
        y = Q @ c
        try:
            x, A, _ = _normalized(B, y, s_total, cap)
        except ScalingOverflowError:
            if not confirm_infeasible():
                raise
            status = Status.DIVERGED
            break
        r = residual(A, s)
        fval = objective(B, y, cap)
        trace.append(TraceEntry(it, fval, r, step))
        history.append(r)
        log.debug("newton it=%d f=%.17g residual=%.3e step=%.3g", it, fval, r, step)
        if r <= opts.residual_tol:
            status = Status.CONVERGED
            break

        w = opts.stall_window
        stalled = len(history) > w and history[-1] > 0.9 * history[-1 - w]
        if np.linalg.norm(y) > opts.divergence_norm_cap or stalled:
            if confirm_infeasible():
                status = Status.DIVERGED
                break
        if it >= opts.max_iters:
            if confirm_infeasible():
                status = Status.DIVERGED
            break

        grad, H = gradient_hessian_reduced(B, s, frame, c, cap)
        grad = grad - lag_shift
        try:
            delta = solve_kkt_step(H, grad, opts.hessian_ridge * np.trace(H) / max(p, 1))
        except SolverError:
            if confirm_infeasible():
                status = Status.DIVERGED
                break
            raise

        g0 = lagrangian(c)
        slope = float(grad @ delta)
        t = 1.0
        if -slope > 1e-13 * abs(g0):
            for _ in range(60):
                try:
                    g1 = lagrangian(c + t * delta)
                except ScalingOverflowError:
                    g1 = np.inf
                if g1 <= g0 + opts.armijo_c * t * slope:
                    break
                t *= opts.backtrack_factor
            else:
                t = 0.0
        # else: decrease is below round-off of f; the full step is safe
        c = c + t * delta
        step = t
        it += 1

    # per-mode ratio of scaled mass to target mass; compatibility forces equality
    multipliers = _multipliers(B, Q @ c, s, cap)
    if status is Status.CONVERGED:
        spread = np.max(multipliers) - np.min(multipliers)
        if spread > (1e-9 + 1e-12) * np.max(multipliers):
            raise SolverError(f"mode multipliers disagree: {multipliers}")

    result = ScalingResult(
        scaling=x,
        scaled_tensor=A,
        residual=r,
        iterations=it,
        status=status,
        objective_trace=trace,
        certificate=lp_report if status is Status.DIVERGED else None,
        multipliers=multipliers,
        method="newton",
    )
    return result


def _multipliers(B, y, s, cap):
    A = apply_scaling(B, ScalingVectors.from_stacked(y, B.dims), cap)
    totals = s.totals()
    return np.array([slice_sums(A, k).sum() / totals[k] for k in range(B.ndim)])
