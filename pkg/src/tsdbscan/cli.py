"""Command-line surface: clustering, tuning, sweeps, dip tests, theory
checks, evaluation, and synthetic data.

Every run writes a report.json echoing the resolved configuration and
seed, so any run can be replayed bit-for-bit from its report. Output
files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .core import NOISE, RunStats, count_clusters, dbscan, noise_fraction
from .curve import curve_to_sample, dip_p_value, dip_statistic, sweep_curve
from .data_io import (
    atomic_write_text,
    load_curve,
    load_labels,
    load_matrix,
    synth_blobs,
    write_curve,
    write_labels,
)
from .metrics import ari, exclude_noise, nmi
from .search import TuneConfig, ts_clustering, tse_clustering
from .theory import (
    ConcentrationConfig,
    concentration_experiment,
    expected_k_closed_form,
    mode_epsilon_closed_form,
    monte_carlo_expected_k,
)

REPORT_VERSION = "1"

THREADS_ENV = "TSDBSCAN_THREADS"


def _add_common(p: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        p.add_argument("--input", required=True, help="input CSV/TSV matrix path")
        p.add_argument("--format", choices=["csv", "tsv"], default="csv")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)


def _add_tune(p: argparse.ArgumentParser) -> None:
    p.add_argument("--min-pts", type=int, required=True)
    p.add_argument("--metric", choices=["euclidean", "manhattan", "cosine"], default="euclidean")
    p.add_argument("--itr", type=int, default=6)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--m", type=int, default=30)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsdbscan",
                                     description="DBSCAN with ternary-search radius tuning")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dbscan", help="cluster at a fixed radius")
    _add_common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--min-pts", type=int, required=True)
    p.add_argument("--metric", choices=["euclidean", "manhattan", "cosine"], default="euclidean")

    p = sub.add_parser("tune", help="tune the radius with ternary search and cluster")
    _add_common(p)
    _add_tune(p)

    p = sub.add_parser("tse", help="tune with the subsampled estimator and cluster")
    _add_common(p)
    _add_tune(p)

    p = sub.add_parser("sweep", help="evaluate k(eps) on an even grid")
    _add_common(p)
    p.add_argument("--min-pts", type=int, required=True)
    p.add_argument("--metric", choices=["euclidean", "manhattan", "cosine"], default="euclidean")
    p.add_argument("--grid-size", type=int, default=100)

    p = sub.add_parser("dip", help="dip-test a sweep curve CSV")
    _add_common(p)
    p.add_argument("--n-boot", type=int, default=1000)

    p = sub.add_parser("oracle", help="check the uniform-data theory empirically")
    _add_common(p, needs_input=False)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--dims", type=int, nargs="+", default=[1, 2])
    p.add_argument("--conc-n", type=int, default=5000)
    p.add_argument("--conc-trials", type=int, default=10)

    p = sub.add_parser("eval", help="score predicted labels against ground truth")
    _add_common(p, needs_input=False)
    p.add_argument("--input", required=True, help="predicted labels CSV (one per line)")
    p.add_argument("--labels", required=True, help="ground-truth labels CSV (one per line)")

    p = sub.add_parser("synth", help="generate Gaussian blob data with labels")
    _add_common(p, needs_input=False)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--per-cluster", type=int, default=100)
    p.add_argument("--dims", type=int, default=8)
    p.add_argument("--separation", type=float, default=20.0)

    return parser


def _config_echo(args: argparse.Namespace) -> dict:
    cfg = {k.replace("_", "-"): v for k, v in vars(args).items() if k != "command"}
    cfg["threads"] = os.environ.get(THREADS_ENV)
    return cfg


def _run_dbscan(args, outdir: Path, stats: RunStats) -> dict:
    x = load_matrix(args.input, args.format)
    labeling = dbscan(x, args.epsilon, args.min_pts, metric=args.metric, stats=stats)
    write_labels(outdir / "labels.csv", labeling.labels)
    return {
        "epsilon": args.epsilon,
        "k": count_clusters(labeling),
        "noise_fraction": noise_fraction(labeling),
        "n_points": len(x),
        "n_dims": x.shape[1],
    }


def _run_tune(args, outdir: Path, stats: RunStats, use_tse: bool) -> dict:
    x = load_matrix(args.input, args.format)
    cfg = TuneConfig(min_pts=args.min_pts, itr=args.itr, alpha=args.alpha,
                     m=args.m, seed=args.seed, metric=args.metric)
    runner = tse_clustering if use_tse else ts_clustering
    epsilon, labeling = runner(x, cfg, stats=stats)
    write_labels(outdir / "labels.csv", labeling.labels)
    return {
        "epsilon_star": epsilon,
        "k": count_clusters(labeling),
        "noise_fraction": noise_fraction(labeling),
        "n_points": len(x),
        "n_dims": x.shape[1],
    }


def _run_sweep(args, outdir: Path, stats: RunStats) -> dict:
    from .core import approximate_diameter_ub

    x = load_matrix(args.input, args.format)
    ub0 = approximate_diameter_ub(x, metric=args.metric)
    if ub0 <= 0:
        raise ValueError("degenerate dataset: all points coincide with the first")
    grid = np.linspace(ub0 / 1000, ub0, args.grid_size)
    curve = sweep_curve(x, grid, args.min_pts, metric=args.metric, stats=stats)
    write_curve(outdir / "curve.csv", curve)
    mode_i = int(np.argmax([c.k for c in curve]))
    return {
        "grid_size": args.grid_size,
        "mode_epsilon": curve[mode_i].epsilon,
        "mode_k": curve[mode_i].k,
    }


def _run_dip(args, outdir: Path, stats: RunStats) -> dict:
    curve = load_curve(args.input)
    sample = curve_to_sample(curve)
    dip = dip_statistic(sample)
    p = dip_p_value(sample, args.n_boot, args.seed)
    mode_i = int(np.argmax([c.k for c in curve]))
    return {
        "dip": dip,
        "p_value": p,
        "n_boot": args.n_boot,
        "sample_size": int(len(sample)),
        "mode_epsilon": curve[mode_i].epsilon,
        "mode_k": curve[mode_i].k,
    }


def _run_oracle(args, outdir: Path, stats: RunStats) -> dict:
    n = args.n
    mode_eps = mode_epsilon_closed_form(n)
    mean, stderr = monte_carlo_expected_k(n, np.log(2) / n, args.trials, args.seed, stats=stats)
    ccfg = ConcentrationConfig(rho=args.rho, beta=args.beta, delta=args.delta)
    concentration = [
        concentration_experiment(ccfg, d, args.conc_n, args.conc_trials, args.seed, stats=stats)
        for d in args.dims
    ]
    return {
        "n": n,
        "closed_form_mode_epsilon": mode_eps,
        "closed_form_peak": expected_k_closed_form(n, mode_eps),
        "monte_carlo_mean_k_at_ln2_over_n": mean,
        "monte_carlo_std_error": stderr,
        "concentration": concentration,
    }


def _run_eval(args, outdir: Path, stats: RunStats) -> dict:
    predicted = load_labels(args.input)
    truth = load_labels(args.labels)
    kept_t, kept_p = exclude_noise(truth, predicted)
    k = int(len(np.unique(predicted[predicted != NOISE])))
    return {
        "nmi": nmi(truth, predicted),
        "ari": ari(truth, predicted),
        "nmi_normalization": "arithmetic-mean",
        "noise_fraction": float(np.count_nonzero(predicted == NOISE) / len(predicted)),
        "k": k,
        "excluded_count": int(len(predicted) - len(kept_p)),
    }


def _run_synth(args, outdir: Path, stats: RunStats) -> dict:
    points, labels = synth_blobs(args.k, args.per_cluster, args.dims,
                                 args.separation, args.seed)
    lines = [",".join(repr(float(v)) for v in row) for row in points]
    atomic_write_text(outdir / "data.csv", "\n".join(lines) + "\n")
    write_labels(outdir / "labels.csv", labels)
    return {"n_points": len(points), "n_dims": args.dims, "k": args.k}


_RUNNERS = {
    "dbscan": _run_dbscan,
    "tune": lambda a, o, s: _run_tune(a, o, s, use_tse=False),
    "tse": lambda a, o, s: _run_tune(a, o, s, use_tse=True),
    "sweep": _run_sweep,
    "dip": _run_dip,
    "oracle": _run_oracle,
    "eval": _run_eval,
    "synth": _run_synth,
}


def run(args: argparse.Namespace) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stats = RunStats()
    start = time.perf_counter()
    try:
        results = _RUNNERS[args.command](args, outdir, stats)
    except (ValueError, IndexError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = {
        "version": REPORT_VERSION,
        "tool_version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "results": results,
        "dbscan_invocations": stats.dbscan_invocations,
        "point_evaluations": stats.point_evaluations,
        "wall_clock_seconds": time.perf_counter() - start,
    }
    atomic_write_text(outdir / "report.json", json.dumps(report, indent=2) + "\n")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
