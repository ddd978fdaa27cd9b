"""Newton vs. Sinkhorn on generated feasible instances."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .generate import SplitMix64, generate_feasible
from .newton import newton_scale
from .options import ScalingResult, SolverOptions
from .sinkhorn import sinkhorn_scale

# quadratic-signature window and limits
QUAD_WINDOW = (1e-10, 1e-3)
QUAD_NOISE_FLOOR = 1e-12
QUAD_C_MAX = 1e3

CSV_FIELDS = ["instance", "method", "status", "iterations", "iters_to_1e-6", "residual"]


def iterations_to(result: ScalingResult, level: float):
    """First iteration whose residual is at most ``level`` (None if never)."""
    for e in result.objective_trace:
        if e.residual <= level:
            return e.iteration
    return None


def quadratic_constant(residuals, window=QUAD_WINDOW, floor=QUAD_NOISE_FLOOR):
    """Smallest ``C`` with ``r[k+1] <= C * r[k]**2`` on the window pairs.

    Pairs enter when ``r[k]`` lies in ``window``; pairs whose successor is
    below ``floor`` are at round-off level and impose no constraint. Returns
    0.0 when no pair constrains ``C`` (the iteration jumped the window).
    """
    lo, hi = window
    r = np.asarray(residuals, dtype=np.float64)
    C = 0.0
    for a, b in zip(r[:-1], r[1:]):
        if lo <= a <= hi and b >= floor:
            C = max(C, b / a**2)
    return C


def has_quadratic_signature(residuals, c_max=QUAD_C_MAX) -> bool:
    return quadratic_constant(residuals) <= c_max


@dataclass
class BenchRecord:
    instance: int
    seed: int
    method: str
    status: str
    iterations: int
    iters_to_1e6: int | None
    residual: float
    seconds: float
    residuals: list = field(default_factory=list)

    def csv_row(self, timing=False):
        row = [
            self.instance,
            self.method,
            self.status,
            self.iterations,
            "" if self.iters_to_1e6 is None else self.iters_to_1e6,
            f"{self.residual:.17g}",
        ]
        if timing:
            row.append(f"{self.seconds:.6f}")
        return row


def _run_instance(i, seed, dims, density, newton_opts, sinkhorn_opts, value_spread):
    B, s = generate_feasible(dims, density, seed, value_spread)
    out = []
    for name, solver, opts in (
        ("newton", newton_scale, newton_opts),
        ("sinkhorn", sinkhorn_scale, sinkhorn_opts),
    ):
        t0 = time.perf_counter()
        res = solver(B, s, opts)
        dt = time.perf_counter() - t0
        out.append(
            BenchRecord(
                i, seed, name, res.status.value, res.iterations,
                iterations_to(res, 1e-6), res.residual, dt,
                [e.residual for e in res.objective_trace],
            )
        )
    return out


def instance_seeds(seed: int, count: int) -> list:
    rng = SplitMix64(seed)
    return [rng.next_u64() for _ in range(count)]


def run_bench(
    dims=(5, 5),
    density=1.0,
    count=10,
    seed=1,
    tol=1e-10,
    newton_max_iters=100,
    sinkhorn_max_iters=100_000,
    value_spread=None,
    jobs=1,
) -> list:
    """Run both solvers on ``count`` generated instances; records ordered by instance."""
    newton_opts = SolverOptions(residual_tol=tol, max_iters=newton_max_iters)
    sinkhorn_opts = SolverOptions(residual_tol=tol, max_iters=sinkhorn_max_iters)
    seeds = instance_seeds(seed, count)
    args = [(i, sd, tuple(dims), density, newton_opts, sinkhorn_opts, value_spread)
            for i, sd in enumerate(seeds)]
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            chunks = list(pool.map(lambda a: _run_instance(*a), args))
    else:
        chunks = [_run_instance(*a) for a in args]
    return [rec for chunk in chunks for rec in chunk]


def to_csv(records, timing=False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS + (["seconds"] if timing else []))
    for rec in records:
        w.writerow(rec.csv_row(timing))
    return buf.getvalue()


def to_table(records) -> str:
    head = f"{'inst':>4}  {'method':<8}  {'status':<18}  {'iters':>6}  {'to 1e-6':>7}  {'residual':>10}  {'ms':>9}"
    lines = [head, "-" * len(head)]
    for r in records:
        to6 = "-" if r.iters_to_1e6 is None else str(r.iters_to_1e6)
        lines.append(
            f"{r.instance:>4}  {r.method:<8}  {r.status:<18}  {r.iterations:>6}  "
            f"{to6:>7}  {r.residual:>10.3e}  {1e3 * r.seconds:>9.2f}"
        )
    return "\n".join(lines) + "\n"


def traces(records) -> list:
    return [
        {"instance": r.instance, "seed": r.seed, "method": r.method, "residuals": r.residuals}
        for r in records
    ]
