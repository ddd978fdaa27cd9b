"""Small dense linear algebra: row reduction, nullspaces, Gram-Schmidt."""
import numpy as np

PIVOT_RTOL = 1e-12


def rref(M, rtol=PIVOT_RTOL):
    """Reduced row echelon form by Gauss-Jordan elimination with partial pivoting.

    A column is skipped when its largest remaining entry is below
    ``rtol`` times the largest absolute entry of the matrix.

    Returns
    -------
    R : numpy.ndarray
        The reduced matrix (rows past the rank are zero).
    pivots : list of int
        Pivot column of each nonzero row.
    """
    R = np.array(M, dtype=np.float64, copy=True)
    rows, cols = R.shape
    if R.size == 0:
        return R, []
    tol = rtol * max(float(np.max(np.abs(R))), np.finfo(float).tiny)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= tol:
            R[r:, c] = 0.0
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] /= R[r, c]
        col = R[:, c].copy()
        col[r] = 0.0
        R -= np.outer(col, R[r])
        R[:, c] = 0.0
        R[r, c] = 1.0
        pivots.append(c)
        r += 1
    return R, pivots


def nullspace(M, rtol=PIVOT_RTOL):
    """Orthonormal basis (as columns) of the nullspace of ``M``."""
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    n = M.shape[1]
    R, pivots = rref(M, rtol)
    free = [c for c in range(n) if c not in set(pivots)]
    N = np.zeros((n, len(free)))
    for j, f in enumerate(free):
        N[f, j] = 1.0
        for r, p in enumerate(pivots):
            N[p, j] = -R[r, f]
    return gram_schmidt(N)


def gram_schmidt(A, drop_tol=1e-10):
    """Orthonormalize columns by modified Gram-Schmidt with one re-orthogonalization pass.

    Columns whose norm after projection falls below ``drop_tol`` times their
    original norm are dropped as linearly dependent.
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    Q = []
    for j in range(A.shape[1]):
        v = A[:, j].copy()
        norm0 = np.linalg.norm(v)
        if norm0 == 0.0:
            continue
        for _ in range(2):
            for q in Q:
                v -= (q @ v) * q
        nv = np.linalg.norm(v)
        if nv <= drop_tol * norm0:
            continue
        Q.append(v / nv)
    if not Q:
        return np.zeros((n, 0))
    return np.column_stack(Q)
