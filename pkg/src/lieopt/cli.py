"""Command-line front end.

Subcommands
-----------
ev-full     full-spectrum sort of a symmetric matrix
ev-leading  leading-l eigenvalues
gev         leading-l generalized eigenvalues (needs a constraint matrix)
lda         discriminant analysis on the MNIST training set
bench       the desk-scale benchmark suites

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure (a non-finite state aborts the run; the trace up to the last good
step is still written).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataio
from .exceptions import LieoptError
from .problems import full_spectrum, leading_ev, leading_gev
from .run import (
    ConfigError,
    DataError,
    METHODS,
    NumericalFailure,
    SUITES,
    bench,
    default_step_size,
    run_trajectory,
)
from .trace import write_csv, write_jsonl

_CORRECTED = ("nag-sc-corrected", "nag-c-corrected")


def _add_run_flags(parser: argparse.ArgumentParser, with_l: bool = True) -> None:
    parser.add_argument("--method", default="nag-sc", choices=METHODS)
    parser.add_argument("--n", type=int, default=100, help="problem dimension (synthetic input)")
    if with_l:
        parser.add_argument("--l", type=int, default=2, help="number of leading eigenvalues")
    parser.add_argument("--h", type=float, default=None, help="step size (default: stability heuristic)")
    parser.add_argument("--gamma", type=float, default=1.0, help="constant friction coefficient")
    parser.add_argument("--c", type=float, default=0.01, help="linear friction correction slope")
    parser.add_argument("--steps", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trace-every", type=int, default=100)
    parser.add_argument("--order", default="2", choices=["2", "4a", "4b"],
                        help="momentum integrator order")
    parser.add_argument("--a-file", default=None, help="objective matrix (text or .lopt blob)")
    parser.add_argument("--out", default=None, help="trace output path (default: stdout summary only)")
    parser.add_argument("--format", dest="fmt", default="csv", choices=["csv", "jsonl"])


def _load_matrix(path: str) -> np.ndarray:
    try:
        if path.endswith(".lopt"):
            return dataio.load_scatter_pair(path).between
        return dataio.load_matrix_text(path)
    except OSError as err:
        raise DataError(f"cannot read matrix from {path}: {err}") from err
    except LieoptError as err:
        raise DataError(f"bad matrix file {path}: {err}") from err


def _validate(args) -> None:
    if args.steps < 1:
        raise ConfigError(f"steps must be >= 1, got {args.steps}")
    if args.h is not None and args.h <= 0:
        raise ConfigError(f"h must be > 0, got {args.h}")
    if getattr(args, "l", 1) < 1:
        raise ConfigError(f"l must be >= 1, got {args.l}")
    if args.trace_every < 1:
        raise ConfigError(f"trace-every must be >= 1, got {args.trace_every}")
    if args.method in _CORRECTED and args.c <= 0:
        raise ConfigError(f"corrected methods need c > 0, got {args.c}")


def _emit(args, result, resolved: dict) -> None:
    last = result.records[-1]
    if args.out is not None:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        if args.fmt == "csv":
            write_csv(result.records, out)
        else:
            write_jsonl(result.records, out)
        sidecar = out.with_name(out.name + ".config.json")
        sidecar.write_text(json.dumps(resolved, indent=2, sort_keys=True) + "\n")
    print(
        f"{resolved['command']} method={args.method} steps={last.step} "
        f"objective={last.objective:.6e} eig_err={last.eig_err:.3e} "
        f"group_drift={last.group_drift:.3e}"
    )


def _run_ev(args, command: str) -> int:
    _validate(args)
    if args.a_file is not None:
        matrix = _load_matrix(args.a_file)
    else:
        matrix = dataio.gen_goe(args.n, args.seed)
    if command == "ev-full":
        problem = full_spectrum(matrix)
    else:
        if args.l > matrix.shape[0]:
            raise ConfigError(f"l={args.l} exceeds the dimension {matrix.shape[0]}")
        problem = leading_ev(matrix, args.l)
    h = args.h if args.h is not None else default_step_size(problem, args.method)
    result = run_trajectory(
        problem, args.method, args.steps, h,
        gamma=args.gamma, c=args.c, order=args.order, trace_every=args.trace_every,
    )
    resolved = dict(command=command, method=args.method, n=matrix.shape[0],
                    l=getattr(args, "l", None), h=h, gamma=args.gamma, c=args.c,
                    steps=args.steps, seed=args.seed, trace_every=args.trace_every,
                    order=args.order, a_file=args.a_file, format=args.fmt)
    _emit(args, result, resolved)
    return 0


def _run_gev(args) -> int:
    _validate(args)
    if args.a_file is not None:
        matrix = _load_matrix(args.a_file)
    else:
        matrix = dataio.gen_goe(args.n, args.seed)
    if args.b_file is not None:
        constraint = _load_matrix(args.b_file)
    else:
        # synthetic well-conditioned constraint, reproducible from the seed
        rng = np.random.Generator(np.random.Philox(key=args.seed + 1))
        raw = rng.standard_normal((matrix.shape[0], matrix.shape[0]))
        constraint = raw @ raw.T / matrix.shape[0] + np.eye(matrix.shape[0])
    if args.l > matrix.shape[0]:
        raise ConfigError(f"l={args.l} exceeds the dimension {matrix.shape[0]}")
    try:
        problem = leading_gev(matrix, constraint, args.l)
    except LieoptError as err:
        raise DataError(f"constraint matrix rejected: {err}") from err
    h = args.h if args.h is not None else default_step_size(problem, args.method)
    result = run_trajectory(
        problem, args.method, args.steps, h,
        gamma=args.gamma, c=args.c, order=args.order, trace_every=args.trace_every,
    )
    resolved = dict(command="gev", method=args.method, n=matrix.shape[0], l=args.l,
                    h=h, gamma=args.gamma, c=args.c, steps=args.steps, seed=args.seed,
                    trace_every=args.trace_every, order=args.order,
                    a_file=args.a_file, b_file=args.b_file, format=args.fmt)
    _emit(args, result, resolved)
    return 0


def _run_lda(args) -> int:
    _validate(args)
    try:
        images, labels = dataio.load_mnist_training(args.data_dir)
    except OSError as err:
        raise DataError(f"cannot read the MNIST training files: {err}") from err
    except LieoptError as err:
        raise DataError(f"bad MNIST file: {err}") from err
    pair = dataio.lda_scatter_from_images(images, labels, args.crop)
    pair = dataio.normalize_pair(pair)
    if args.no_gap:
        pair = dataio.remove_eigengap(pair)
    try:
        problem = leading_gev(pair.between, pair.within, args.l)
    except LieoptError as err:
        raise DataError(f"within-class scatter is not positive definite: {err}") from err
    h = args.h if args.h is not None else default_step_size(problem, args.method)
    result = run_trajectory(
        problem, args.method, args.steps, h,
        gamma=args.gamma, c=args.c, order=args.order, trace_every=args.trace_every,
    )
    resolved = dict(command="lda", method=args.method, n=problem.dim, l=args.l, h=h,
                    gamma=args.gamma, c=args.c, steps=args.steps,
                    trace_every=args.trace_every, order=args.order, crop=args.crop,
                    no_gap=args.no_gap, data_dir=args.data_dir, format=args.fmt)
    _emit(args, result, resolved)
    return 0


def _run_bench(args) -> int:
    rows = bench(
        args.suite,
        args.out,
        fmt=args.fmt,
        seed=args.seed,
        n=args.n,
        steps=args.steps,
        step_size=args.h,
        trace_every=args.trace_every,
        gamma=args.gamma,
        c=args.c,
        batch_size=args.batch_size,
        sigma_scale=args.sigma_scale,
        data_dir=args.data_dir,
    )
    width = max(len(row["method"]) for row in rows)
    print(f"suite {args.suite}: traces in {args.out}")
    for row in rows:
        print(
            f"  {row['method']:<{width}}  eig_err={row['final_eig_err']:.3e}  "
            f"subspace_err={row['final_subspace_err']:.3e}  "
            f"max_drift={row['max_group_drift']:.3e}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lieopt",
        description="Momentum optimization on the group {R : R^T B R = I} "
                    "for leading (generalized) eigenvalue problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_full = sub.add_parser("ev-full", help="sort the whole spectrum")
    _add_run_flags(p_full, with_l=False)

    p_lead = sub.add_parser("ev-leading", help="leading-l eigenvalues")
    _add_run_flags(p_lead)

    p_gev = sub.add_parser("gev", help="leading-l generalized eigenvalues")
    _add_run_flags(p_gev)
    p_gev.add_argument("--b-file", default=None, help="constraint matrix (text or .lopt blob)")

    p_lda = sub.add_parser("lda", help="discriminant analysis on MNIST")
    _add_run_flags(p_lda)
    p_lda.set_defaults(l=9, steps=10_000)
    p_lda.add_argument("--data-dir", default=None,
                       help="directory with the IDX files (default: $LIEOPT_DATA_DIR)")
    p_lda.add_argument("--crop", type=int, default=4, help="pixels cropped per side")
    p_lda.add_argument("--no-gap", action="store_true",
                       help="collapse the top eigengap before solving")

    p_bench = sub.add_parser("bench", help="run a benchmark suite")
    p_bench.add_argument("suite", choices=SUITES)
    p_bench.add_argument("--out", default=None, help="output directory (default: bench-<suite>)")
    p_bench.add_argument("--format", dest="fmt", default="csv", choices=["csv", "jsonl"])
    p_bench.add_argument("--seed", type=int, default=2024)
    p_bench.add_argument("--n", type=int, default=None)
    p_bench.add_argument("--steps", type=int, default=None)
    p_bench.add_argument("--h", type=float, default=None)
    p_bench.add_argument("--trace-every", type=int, default=None)
    p_bench.add_argument("--gamma", type=float, default=1.0)
    p_bench.add_argument("--c", type=float, default=0.01)
    p_bench.add_argument("--batch-size", type=int, default=20)
    p_bench.add_argument("--sigma-scale", type=float, default=0.25)
    p_bench.add_argument("--data-dir", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("ev-full", "ev-leading"):
            return _run_ev(args, args.command)
        if args.command == "gev":
            return _run_gev(args)
        if args.command == "lda":
            return _run_lda(args)
        if args.command == "bench":
            if args.out is None:
                args.out = f"bench-{args.suite}"
            return _run_bench(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except NumericalFailure as err:
        last = err.records[-1] if err.records else None
        where = f"last good step {last.step}" if last else "no good steps"
        print(f"error: {err} ({where})", file=sys.stderr)
        out = getattr(args, "out", None)
        if out is not None and err.records and not Path(out).is_dir():
            out = Path(out)
            out.parent.mkdir(parents=True, exist_ok=True)
            if getattr(args, "fmt", "csv") == "csv":
                write_csv(err.records, out)
            else:
                write_jsonl(err.records, out)
        return 4


if __name__ == "__main__":
    sys.exit(main())
