"""Bounded-variable primal simplex with Bland's anti-cycling rule.

Solves::

    minimize    c @ x
    subject to  A @ x <= b,   0 <= x <= upper

for ``b >= 0``, so that the all-slack basis with every structural variable
at its lower bound is a feasible starting point and no phase one is needed.
Nonbasic variables sit at either bound; a ratio test that is won by the
entering variable's own bound flips it without a basis change.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SolverError

DEFAULT_MAX_PIVOTS = 10_000


@dataclass
class LPResult:
    x: np.ndarray
    fun: float
    status: str  # "optimal" | "unbounded"
    pivots: int


def bounded_simplex(c, A, b, upper, max_pivots=DEFAULT_MAX_PIVOTS, tol=1e-11):
    c = np.asarray(c, dtype=np.float64).reshape(-1)
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    upper = np.broadcast_to(np.asarray(upper, dtype=np.float64), c.shape)
    m, n = A.shape
    if c.size != n or b.size != m:
        raise ValueError("inconsistent LP dimensions")
    if np.any(b < 0):
        raise ValueError("right-hand side must be nonnegative")
    if np.any(upper < 0):
        raise ValueError("upper bounds must be nonnegative")

    N = n + m
    T = np.hstack([A, np.eye(m)])  # B^-1 [A I]
    ub = np.concatenate([upper, np.full(m, np.inf)])
    cost = np.concatenate([c, np.zeros(m)])
    basis = np.arange(n, N)
    beta = b.copy()  # values of basic variables
    at_upper = np.zeros(N, dtype=bool)
    d = cost.copy()  # reduced costs; slack basis has zero cost

    pivots = 0
    while True:
        is_basic = np.zeros(N, dtype=bool)
        is_basic[basis] = True
        entering = -1
        for j in range(N):  # Bland: lowest eligible index
            if is_basic[j] or ub[j] == 0.0:
                continue
            if (not at_upper[j] and d[j] < -tol) or (at_upper[j] and d[j] > tol):
                entering = j
                break
        if entering < 0:
            break
        if pivots >= max_pivots:
            raise SolverError(f"simplex exceeded {max_pivots} pivots")
        pivots += 1

        j = entering
        sigma = -1.0 if at_upper[j] else 1.0
        alpha = sigma * T[:, j]
        # row == -1 stands for a bound flip of the entering variable; it wins ties
        t_best = ub[j]
        row = -1
        for i in range(m):
            if alpha[i] > tol:
                t = beta[i] / alpha[i]
            elif alpha[i] < -tol and np.isfinite(ub[basis[i]]):
                t = (ub[basis[i]] - beta[i]) / (-alpha[i])
            else:
                continue
            t = max(t, 0.0)
            if t < t_best - tol:
                t_best, row = t, i
            elif t <= t_best + tol and row >= 0 and basis[i] < basis[row]:
                row = i
        if not np.isfinite(t_best):
            x = _primal(n, basis, beta, at_upper, ub)
            return LPResult(x, -np.inf, "unbounded", pivots)

        beta -= t_best * alpha
        if row < 0:
            at_upper[j] = not at_upper[j]
            continue

        leaving = basis[row]
        at_upper[leaving] = alpha[row] < 0
        entering_value = (ub[j] if at_upper[j] else 0.0) + sigma * t_best
        at_upper[j] = False

        piv = T[row, j]
        T[row] /= piv
        col = T[:, j].copy()
        col[row] = 0.0
        T -= np.outer(col, T[row])
        d -= d[j] * T[row]
        basis[row] = j
        beta[row] = entering_value
        # snap basic values that drifted past their bounds
        np.clip(beta, 0.0, ub[basis], out=beta)

    x = _primal(n, basis, beta, at_upper, ub)
    return LPResult(x, float(c @ x), "optimal", pivots)


def _primal(n, basis, beta, at_upper, ub):
    full = np.where(at_upper, ub, 0.0)
    full = np.where(np.isfinite(full), full, 0.0)
    full[basis] = beta
    return full[:n].copy()
