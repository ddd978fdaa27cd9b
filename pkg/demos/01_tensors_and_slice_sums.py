"""Sparse tensors, slice sums and diagonal scaling.

Run with ``python demos/01_tensors_and_slice_sums.py``.
"""
# %%
import numpy as np

from slicescale import (
    ScalingVectors,
    SparseTensor,
    TargetSums,
    apply_scaling,
    check_compatibility,
    residual,
    slice_sums,
    validate_no_zero_slice,
)

# A tensor only stores its positive entries (sorted COO). Indices are 0-based.
B = SparseTensor.from_dense(np.array([[1.0, 2.0], [3.0, 4.0]]))
print(B.dims, B.nnz)
print(B.indices.tolist(), B.values.tolist())

# %% Slice sums: mode 0 gives row sums, mode 1 column sums.
print("rows", slice_sums(B, 0), "cols", slice_sums(B, 1))

cube = SparseTensor.from_dense(np.ones((2, 2, 2)))
print("cube, every mode:", [slice_sums(cube, k).tolist() for k in range(3)])

# %% A zero slice makes scaling impossible, so it is reported up front.
print(validate_no_zero_slice(SparseTensor.from_dense(np.array([[1.0, 1.0], [0.0, 0.0]]))))

# %% Targets must share one total across modes.
print(check_compatibility(TargetSums(([3.0, 7.0], [4.0, 6.0]))))
print(check_compatibility(TargetSums(([1.0, 1.0], [1.0, 2.0]))))

# %% Scaling multiplies entry (i, j) by exp(x_0[i] + x_1[j]); the pattern never changes.
x = ScalingVectors(([np.log(2), 0.0], [0.0, np.log(3)]))
A = apply_scaling(SparseTensor.from_dense(np.ones((2, 2))), x)
print(A.to_dense())

# The residual is the largest relative slice-sum mismatch.
print(residual(A, TargetSums(([8.0, 4.0], [3.0, 9.0]))))
