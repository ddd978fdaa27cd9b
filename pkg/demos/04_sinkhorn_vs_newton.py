"""Sinkhorn (iterative proportional fitting) as a baseline.

Each sweep rescales the slices of one mode after another to match their
targets. It converges linearly; Newton converges quadratically. The bench
helpers count iterations to reach a residual of 1e-6.
"""
# %%
import numpy as np

from slicescale import SolverOptions, SparseTensor, TargetSums, sinkhorn_scale
from slicescale.bench import run_bench, to_table

# One row update of [[1, 2], [3, 4]] toward row sums (1, 1).
B = SparseTensor.from_dense(np.array([[1.0, 2.0], [3.0, 4.0]]))
steps = []
sinkhorn_scale(B, TargetSums(([1.0, 1.0], [1.0, 1.0])), SolverOptions(max_iters=1),
               callback=lambda k, A: steps.append(A.to_dense()))
print(steps[0])  # [[1/3, 2/3], [3/7, 4/7]]

# %% Side by side on generated instances.
records = run_bench(dims=(5, 5, 4), density=0.6, count=5, seed=1, value_spread=1.0)
print(to_table(records))

# %% Sinkhorn drifts on infeasible targets until a log-factor passes the cap.
B = SparseTensor.from_dense(np.array([[0.0, 1.0], [1.0, 1.0]]))
res = sinkhorn_scale(B, TargetSums(([1.0, 1.0], [1.5, 0.5])), SolverOptions(max_iters=100_000))
print(res.status.value, "after", res.iterations, "sweeps; factors", res.scaling.stacked().round(1))
