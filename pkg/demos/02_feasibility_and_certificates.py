"""Can a tensor be scaled to the targets? An LP answers, with a witness if not.

A zero pattern can make some targets unreachable. For the matrix

    [[0, 1],
     [1, 1]]

row sums (1, 1) force a_01 = 1, so a column-0 sum of 1.5 would need
a_11 = -0.5. The LP finds a direction y with nonpositive exponent sums on
the support that no scaling can compensate, and that y is the certificate.
"""
# %%
import numpy as np

from slicescale import SparseTensor, TargetSums, check_scalability, verify_certificate
from slicescale.feasibility import maxflow_verdict
from slicescale.tensor import exponent_sums

B = SparseTensor.from_dense(np.array([[0.0, 1.0], [1.0, 1.0]]))
bad = TargetSums(([1.0, 1.0], [1.5, 0.5]))
good = TargetSums(([1.0, 1.0], [0.5, 1.5]))

# %%
rep = check_scalability(B, bad)
print(rep.verdict, "LP optimum", rep.lp_optimum)
y = rep.certificate
print("certificate:", [v.round(4).tolist() for v in y.vectors])
print("support exponent sums:", exponent_sums(B, y).round(4))
print("s_k . x_k:", [float(s @ v) for s, v in zip(bad.vectors, y.vectors)])
print("verified:", verify_certificate(B, bad, y))

# The hand certificate works too.
hand = np.array([1.0, -1.0, 0.5, -1.5])
print("hand certificate verified:", verify_certificate(B, bad, hand))

# %% Swapping the column targets makes the problem feasible.
print(check_scalability(B, good).verdict)

# %% For matrices a transportation max-flow gives an independent answer.
rng = np.random.default_rng(0)
agree = 0
for _ in range(100):
    P = rng.random((4, 4)) < 0.45
    if not (P.any(0).all() and P.any(1).all()):
        agree += 1
        continue
    M = SparseTensor.from_dense(P * rng.uniform(0.5, 1.5, (4, 4)))
    r, c = rng.uniform(0.5, 1.5, 4), rng.uniform(0.5, 1.5, 4)
    s = TargetSums((r, c * r.sum() / c.sum()))
    agree += check_scalability(M, s).feasible == maxflow_verdict(M, s)
print(f"LP and max-flow agree on {agree}/100 random patterns")
