"""The subspaces U, V and Vperp behind the solver.

U holds the scaling vectors with s_k . x_k = 0 in every mode. V is the part
of U on which every support exponent sum is zero, so moving along V leaves
the scaled tensor unchanged. Newton works on the complement Vperp.
"""
# %%
import numpy as np

from slicescale import SparseTensor, TargetSums, build_frame, embed, objective, project_to

# A diagonal pattern splits into two blocks, so V has one direction.
B = SparseTensor.from_dense(np.eye(2))
f = build_frame(B, TargetSums(([1.0, 1.0], [1.0, 1.0])))
print("dims: U", f.u, "V", f.v, "Vperp", f.p)
print("V direction", f.basis_V[:, 0].round(4))  # +-(1, -1, -1, 1) / 2

# %% Full support leaves no such direction.
f = build_frame(SparseTensor.from_dense(np.ones((2, 2, 2))),
                TargetSums(([4.0, 4.0], [4.0, 4.0], [4.0, 4.0])))
print("cube: U", f.u, "V", f.v, "Vperp", f.p)

# %% f is constant along V.
rng = np.random.default_rng(0)
B = SparseTensor.from_dense(np.kron(np.eye(2), np.ones((2, 3))) * rng.uniform(0.5, 1.5, (4, 6)))
s = TargetSums((np.full(4, 1.5), np.ones(6)))
f = build_frame(B, s)
y = rng.normal(size=f.n)
for t in (0.0, 1.0, 5.0):
    print(t, objective(B, y + t * f.basis_V[:, 0]))

# %% Coordinates round-trip through each basis.
c = project_to(f, embed(f, np.arange(f.p, dtype=float)))
print(c.round(12))
