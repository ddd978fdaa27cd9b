"""Positive diagonal scaling of nonnegative tensors to prescribed slice sums."""
from .exceptions import (
    DimensionError,
    FormatError,
    IncompatibleTargetsError,
    ScalingOverflowError,
    SliceScaleError,
    SolverError,
    ZeroSliceError,
)
from .feasibility import FeasibilityReport, check_scalability, verify_certificate
from .generate import SplitMix64, generate_feasible, generate_infeasible_2mode
from .maxflow import pattern_feasible_maxflow
from .newton import gradient_hessian_reduced, newton_scale, objective, solve_kkt_step
from .options import ScalingResult, SolverOptions, Status
from .sinkhorn import sinkhorn_scale
from .subspace import SubspaceFrame, build_frame, embed, max_support_sum, project_to
from .tensor import (
    ScalingVectors,
    SparseTensor,
    TargetSums,
    apply_scaling,
    check_compatibility,
    residual,
    same_zero_pattern,
    slice_sums,
    validate_no_zero_slice,
)

__version__ = "0.1.0"
