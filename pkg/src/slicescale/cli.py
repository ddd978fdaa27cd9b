"""Command-line interface: ``slicescale {check,scale,bench,gen}``.

Exit codes: 0 feasible / converged, 1 input or solver error,
2 infeasible / diverged, 3 iteration limit reached.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import io as sio
from .bench import run_bench, to_csv, to_table, traces
from .exceptions import SliceScaleError
from .feasibility import check_scalability
from .generate import generate_feasible, generate_infeasible_2mode
from .newton import newton_scale
from .options import SolverOptions, Status
from .sinkhorn import sinkhorn_scale
from .subspace import build_frame

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_MAX_ITERS = 0, 1, 2, 3
DEFAULT_MAX_ITERS = {"newton": 100, "sinkhorn": 10_000}

log = logging.getLogger("slicescale")


def _configure_logging():
    level = os.environ.get("SLICESCALE_LOG", "off").strip().lower()
    if level not in ("off", "info", "debug"):
        level = "off"
    if level == "off":
        logging.getLogger("slicescale").addHandler(logging.NullHandler())
        return
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if level == "debug" else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _dump_frame(path, frame):
    with open(path, "w", encoding="utf-8") as fh:
        for name in ("U", "V", "Vperp"):
            Q = frame.basis(name)
            fh.write(f"# basis {name} {Q.shape[0]} x {Q.shape[1]}\n")
            for row in Q:
                fh.write(" ".join(sio.fmt(v) for v in row) + "\n")


def cmd_check(args) -> int:
    B = sio.read_tensor(args.tensor)
    s = sio.read_targets(args.targets)
    frame = build_frame(B, s)
    if args.dump_frame:
        _dump_frame(args.dump_frame, frame)
    report = check_scalability(B, s, max_pivots=args.max_pivots, frame=frame)
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        print(report.verdict)
        if report.certificate is not None:
            sys.stdout.write(sio.format_vectors(report.certificate, "certificate"))
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_scale(args) -> int:
    B = sio.read_tensor(args.tensor)
    s = sio.read_targets(args.targets)
    max_iters = args.max_iters if args.max_iters is not None else DEFAULT_MAX_ITERS[args.method]
    opts = SolverOptions(residual_tol=args.tol, max_iters=max_iters)
    if args.method == "newton":
        result = newton_scale(B, s, opts)
    else:
        result = sinkhorn_scale(B, s, opts)
        if result.status is Status.DIVERGED:
            result.certificate = check_scalability(B, s)

    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(result.trace_dict(), fh, indent=1)

    summary = sys.stdout
    if args.output:
        sio.write_tensor(args.output, result.scaled_tensor)
        scaling_path = args.scaling_out or args.output + ".scaling"
        sio.write_vectors(scaling_path, result.scaling, "scaling")
    else:
        sys.stdout.write(sio.format_tensor(result.scaled_tensor))
        sys.stdout.write(sio.format_vectors(result.scaling, "scaling"))
        summary = sys.stderr
    print(
        f"status {result.status.value}\nresidual {sio.fmt(result.residual)}\n"
        f"iterations {result.iterations}",
        file=summary,
    )

    if result.status is Status.CONVERGED:
        return EXIT_OK
    if result.status is Status.DIVERGED:
        cert = result.certificate
        if cert is not None and not cert.feasible:
            summary.write(sio.format_vectors(cert.certificate, "certificate"))
            return EXIT_INFEASIBLE
        # divergence not confirmed by the LP
        return EXIT_MAX_ITERS
    return EXIT_MAX_ITERS


def cmd_bench(args) -> int:
    records = run_bench(
        dims=args.dims,
        density=args.density,
        count=args.count,
        seed=args.seed,
        tol=args.tol,
        value_spread=args.value_spread,
        jobs=args.jobs,
    )
    sys.stdout.write(to_table(records))
    csv_text = to_csv(records, timing=args.timing)
    if args.csv == "-":
        sys.stdout.write(csv_text)
    elif args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    if args.traces:
        with open(args.traces, "w", encoding="utf-8") as fh:
            json.dump(traces(records), fh)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.infeasible:
        if len(args.dims) != 2 or args.dims[0] != args.dims[1]:
            raise SliceScaleError("--infeasible needs square two-mode dims, e.g. --dims 4 4")
        B, s = generate_infeasible_2mode(args.dims[0], args.seed)
    else:
        B, s = generate_feasible(args.dims, args.density, args.seed, args.value_spread)
    ext = ".json" if args.json else ""
    tensor_path = f"{args.output}.tensor{ext}"
    targets_path = f"{args.output}.targets{ext}"
    sio.write_tensor(tensor_path, B)
    sio.write_vectors(targets_path, s, "targets")
    print(tensor_path)
    print(targets_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicescale",
        description="Positive diagonal scaling of nonnegative tensors to prescribed slice sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide scalability, printing a certificate if infeasible")
    p.add_argument("tensor")
    p.add_argument("targets")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--dump-frame", metavar="PATH", help="write the subspace bases as text matrices")
    p.add_argument("--max-pivots", type=int, default=10_000)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scale", help="compute the scaled tensor")
    p.add_argument("tensor")
    p.add_argument("targets")
    p.add_argument("--method", choices=("newton", "sinkhorn"), default="newton")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=None,
                   help="Newton iterations or Sinkhorn sweeps (default 100 / 10000)")
    p.add_argument("--trace", metavar="PATH", help="write a JSON iteration trace")
    p.add_argument("-o", "--output", metavar="PATH", help="scaled tensor output file")
    p.add_argument("--scaling-out", metavar="PATH",
                   help="scaling vectors output file (default: OUTPUT.scaling)")
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("bench", help="compare Newton and Sinkhorn on generated instances")
    p.add_argument("--dims", type=int, nargs="+", default=[5, 5])
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--value-spread", type=float, default=None)
    p.add_argument("--csv", metavar="PATH", help="CSV output file, '-' for stdout")
    p.add_argument("--timing", action="store_true", help="add wall time to the CSV")
    p.add_argument("--traces", metavar="PATH", help="JSON file of per-instance residual traces")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("--dims", type=int, nargs="+", required=True)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--value-spread", type=float, default=None,
                   help="entries log-uniform over [10**-v, 10**v]")
    p.add_argument("--infeasible", action="store_true", help="square infeasible matrix instance")
    p.add_argument("--json", action="store_true", help="write the JSON mirror formats")
    p.add_argument("-o", "--output", required=True, metavar="PREFIX")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    np.seterr(over="ignore", under="ignore")
    try:
        return args.func(args)
    except (SliceScaleError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
