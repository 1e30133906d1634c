"""Command-line entry point: ``scsa bench | plot-operator | solve``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import bench
from .linalg import save_matrix_csv
from .metrics import snr_rec, srr
from .problems import load_problem


def _grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be start:stop:count")
    a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
    if k < 2 or not b > a:
        raise argparse.ArgumentTypeError("grid needs stop > start and count >= 2")
    return a, b, k


def _ints(text):
    try:
        return bench.parse_range(text, integer=True)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _floats(text):
    try:
        return bench.parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scsa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run a seeded Monte-Carlo sweep and write CSV")
    b.add_argument("--kind", required=True, choices=bench.KINDS)
    b.add_argument("--n", type=int, default=250)
    b.add_argument("--m", type=int, default=500)
    b.add_argument("--s", type=_ints, default=[50], help="list a,b,c or range a:b:step")
    b.add_argument("--sigma-w", type=_floats, default=[1e-2])
    b.add_argument("--c", type=_floats, default=[0.1])
    b.add_argument("--trials", type=int, default=50)
    b.add_argument("--algs", default="", help="comma-separated algorithm names")
    b.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed + t")
    b.add_argument("--out", default="results.csv")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--tune", action="store_true",
                   help="tune lambda multipliers for ilt / ist-<p> at sigma_w = 1e-2 first")
    b.add_argument("--sigma", type=_floats, default=[100.0, 1.0, 0.1],
                   help="operator-plot only: sigma values")
    b.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="operator-plot only: base lambda")
    b.add_argument("--grid", type=_grid, default=(-4.0, 4.0, 801),
                   help="operator-plot only: start:stop:count (use --grid=-4:4:801)")

    p = sub.add_parser("plot-operator", help="write thresholding curves as CSV")
    p.add_argument("--sigma", type=_floats, default=[100.0, 1.0, 0.1])
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--grid", type=_grid, default=(-4.0, 4.0, 801))
    p.add_argument("--out", default="operator.csv")

    s = sub.add_parser("solve", help="solve one saved problem directory")
    s.add_argument("--problem-dir", required=True)
    s.add_argument("--alg", required=True)
    s.add_argument("--c", type=float, default=0.1)
    s.add_argument("--out", default="x_hat.csv")
    return parser


def _cmd_bench(args) -> int:
    if args.kind == "operator-plot":
        bench.write_operator_csv(args.out, args.sigma, args.lam, args.grid)
        return 0
    algs = tuple(a.strip() for a in args.algs.split(",") if a.strip())
    spec = bench.ExperimentSpec(
        kind=args.kind, n=args.n, m=args.m, s_values=tuple(args.s),
        sigma_w_values=tuple(args.sigma_w), c_values=tuple(args.c), trials=args.trials,
        algorithms=algs, base_seed=args.seed, out_path=args.out, workers=args.workers,
    )
    if args.tune:
        mults = {}
        for a in spec.algorithms:
            if a == "ilt" or (a.startswith("ist-")):
                mults[a] = bench.tune_lambda(a, spec.n, spec.m, spec.s_values[0],
                                             trials=min(spec.trials, 10),
                                             base_seed=spec.base_seed)
                print(f"tuned {a}: lambda multiplier {mults[a]!r}", file=sys.stderr)
        spec = dataclasses.replace(spec, lambda_multipliers=mults)
    rows, summary = bench.run_experiment(spec)
    for rec in summary:
        print(
            f"{rec['algorithm']:>14} s={rec['s']:<4} sigma_w={rec['sigma_w']:<8g} "
            f"c={rec['c']:<5g} success={rec['success_rate']:.3f} "
            f"msnr={rec['msnr_db']:.2f}dB srr={rec['srr']:.3f} "
            f"time={rec['mean_time_ms']:.1f}ms"
        )
    return 0 if all(r.status == "ok" for r in rows) else 1


def _cmd_plot(args) -> int:
    bench.write_operator_csv(args.out, args.sigma, args.lam, args.grid, args.mu)
    return 0


def _cmd_solve(args) -> int:
    problem = load_problem(args.problem_dir)
    cache = bench._ProblemCache(problem)
    x, _, ok = bench.run_algorithm(bench._check_alg(args.alg), cache, args.c)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_matrix_csv(out, x.reshape(-1, 1))
    report = {
        "algorithm": args.alg,
        "status": "ok" if ok else "maxiter",
        "snr_db": snr_rec(problem.x_true, x),
        "support_exact": srr(problem.x_true, x, problem.s),
    }
    print(json.dumps(report))
    return 0 if ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "plot-operator":
            return _cmd_plot(args)
        return _cmd_solve(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
