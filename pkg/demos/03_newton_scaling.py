"""Scaling by damped Newton on the convex objective.

The scaled tensor minimizes f(y) = sum b * exp(exponent sum) over the
subspace where every s_k . x_k vanishes. Directions that leave every
exponent sum unchanged (the subspace V) are removed, so the Hessian on the
remaining coordinates is positive definite and Newton converges
quadratically near the solution.
"""
# %%
import numpy as np

from slicescale import (
    SparseTensor,
    TargetSums,
    generate_feasible,
    newton_scale,
    slice_sums,
)

B = SparseTensor.from_dense(np.ones((2, 2)))
res = newton_scale(B, TargetSums(([1.0, 2.0], [2.0, 1.0])))
print(res.status.value, res.iterations, "iterations")
print(res.scaled_tensor.to_dense())  # rank one: r_i c_j / total

# %% A three-mode instance with a sparse pattern.
B, s = generate_feasible((4, 3, 3), density=0.6, seed=3, value_spread=2.0)
res = newton_scale(B, s)
for e in res.objective_trace:
    print(f"it {e.iteration:2d}  f {e.objective:.10g}  residual {e.residual:.2e}  step {e.step:g}")
print("mode 1 sums", slice_sums(res.scaled_tensor, 1).round(12))
print("target     ", s.vectors[1].round(12))
print("multipliers", res.multipliers)

# %% The scaled tensor does not depend on where Newton starts.
a = newton_scale(B, s, seed=1).scaled_tensor.values
b = newton_scale(B, s, seed=2).scaled_tensor.values
print("max relative difference between two starts:", np.max(np.abs(a - b) / b))

# %% Infeasible targets: the iterates run off, the LP confirms, and a certificate comes back.
B = SparseTensor.from_dense(np.array([[0.0, 1.0], [1.0, 1.0]]))
res = newton_scale(B, TargetSums(([1.0, 1.0], [1.5, 0.5])))
print(res.status.value, "after", res.iterations, "iterations")
print("certificate", [v.round(4).tolist() for v in res.certificate.certificate.vectors])
