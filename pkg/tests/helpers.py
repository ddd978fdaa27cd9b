import numpy as np

from slicescale import SparseTensor, TargetSums
from slicescale.tensor import all_slice_sums, validate_no_zero_slice


def T(dense):
    return SparseTensor.from_dense(np.asarray(dense, dtype=float))


def S(*vectors):
    return TargetSums(tuple(np.asarray(v, dtype=float) for v in vectors))


def random_pattern_matrix(rng, m, n, density):
    while True:
        P = rng.random((m, n)) < density
        if P.any(axis=0).all() and P.any(axis=1).all():
            return P


def random_d2_instance(rng, m=4, n=4, density=0.45):
    """Random pattern (no zero row/column) with random compatible positive sums."""
    P = random_pattern_matrix(rng, m, n, density)
    B = SparseTensor.from_dense(P * rng.uniform(0.5, 1.5, (m, n)))
    s1 = rng.uniform(0.5, 1.5, m)
    s2 = rng.uniform(0.5, 1.5, n)
    s2 *= s1.sum() / s2.sum()
    return B, S(s1, s2)


def block_instance(rng, dims, density=0.8, integer=False):
    """Feasible instance whose support is a union of two disjoint blocks.

    Each mode's indices are split in two groups; the support lies in
    (group-0 product) U (group-1 product), which gives V a nonzero direction.
    With ``integer=True`` the targets come from an integer tensor, so they
    are exact in floating point.
    """
    d = len(dims)
    while True:
        groups = []
        for m in dims:
            cut = int(rng.integers(1, m))
            perm = rng.permutation(m)
            groups.append((perm[:cut], perm[cut:]))
        cells = []
        for g in (0, 1):
            mesh = np.meshgrid(*(groups[k][g] for k in range(d)), indexing="ij")
            block = np.stack([a.ravel() for a in mesh], axis=1)
            keep = rng.random(len(block)) < density
            cells.append(block[keep])
        idx = np.vstack(cells)
        if len(idx) == 0:
            continue
        probe = SparseTensor(dims, idx, np.ones(len(idx)))
        if validate_no_zero_slice(probe):
            continue
        if integer:
            A = SparseTensor(dims, idx, rng.integers(1, 6, len(idx)).astype(float))
        else:
            A = SparseTensor(dims, idx, rng.uniform(0.5, 1.5, len(idx)))
        s = TargetSums(tuple(all_slice_sums(A)))
        B = SparseTensor(dims, idx, rng.uniform(0.5, 1.5, len(idx)))
        return B, s


def rel_err(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def integer_targets(B, rng):
    """Targets read off an integer tensor on B's pattern (exact in binary)."""
    A = SparseTensor(B.dims, B.indices, rng.integers(1, 6, B.nnz).astype(float))
    return TargetSums(tuple(all_slice_sums(A)))
