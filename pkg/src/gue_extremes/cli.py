"""Command-line entry point: tables for F2, the Figure-1 correlation data, joint CDF values."""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .distributions import DomainError, joint_cdf, parse_grid, tw_table
from .moments import correlation_extremes, rho_asymptote, tw_moments
from .montecarlo import EnsembleSpec, sample_correlation

FULL_SAMPLES = 10**6
DEFAULT_SAMPLES = 10**5


@dataclass
class RunConfig:
    command: str
    n_list: list = field(default_factory=list)
    tol: float = 1e-10
    samples: int = DEFAULT_SAMPLES
    seed: int = 20100101
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self):
        if not 1e-14 <= self.tol <= 1e-4:
            raise ValueError(f"--tol must lie in [1e-14, 1e-4], got {self.tol}")
        if self.command in ("figure1", "correlation", "montecarlo") and not self.n_list:
            raise ValueError("--n-list must not be empty")


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return "%.15g" % v


def render(columns, rows, cfg: RunConfig, meta=None) -> str:
    if cfg.output_format == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(fmt(v) for v in row) + "\n")
        return buf.getvalue()
    doc = {
        "metadata": {"command": cfg.command, "tol": cfg.tol, "seed": cfg.seed, "version": __version__,
                     "numpy": np.__version__, **(meta or {})},
        "columns": list(columns),
        "rows": [{c: (None if v is None else float(fmt(v)) if not isinstance(v, (int, np.integer)) else int(v))
                  for c, v in zip(columns, row)} for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def emit(text, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_tw_table(cfg: RunConfig, grid: str = "-10:6:0.05"):
    table = tw_table(parse_grid(grid), cfg.tol)
    rows = list(zip(table.grid.tolist(), table.cdf.tolist(), table.pdf.tolist()))
    return ["t", "F2", "F2_pdf"], rows


def cmd_figure1(cfg: RunConfig, monte_carlo: bool = True, det_tol: float = 1e-8):
    rows = []
    for n in cfg.n_list:
        rec = correlation_extremes(n, det_tol)
        row = [n, rec.rho_det, rho_asymptote(n)]
        if monte_carlo:
            for kind in ("gue", "uniform"):
                rho, se = sample_correlation(EnsembleSpec(kind, n), cfg.samples, cfg.seed)
                row += [rho, se]
        else:
            row += [None] * 4
        rows.append(row)
    cols = ["n", "rho_det", "rho_asym", "rho_mc_gue", "stderr_gue", "rho_mc_uniform", "stderr_uniform"]
    return cols, rows


def cmd_joint(cfg: RunConfig, n: int, x: float, y: float):
    v = joint_cdf(n, x, y, cfg.tol)
    cols = ["n", "x", "y", "joint", "product", "deviation", "correction_predictor", "marginal_x", "marginal_y"]
    return cols, [[n, x, y, v.joint, v.product, v.deviation, v.correction_predictor, v.marginal_x, v.marginal_y]]


def cmd_moments(cfg: RunConfig):
    m = tw_moments(cfg.tol)
    return ["mean", "variance", "normalization", "mean_tail"], [[m.mean, m.variance, m.normalization, m.mean_tail]]


def cmd_montecarlo(cfg: RunConfig, ensemble: str):
    rows = []
    for n in cfg.n_list:
        rho, se = sample_correlation(EnsembleSpec(ensemble, n), cfg.samples, cfg.seed)
        rows.append([n, rho, se, cfg.samples])
    return ["n", "rho_mc", "stderr", "samples"], rows


def _n_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --n-list {text!r}")
    if any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("--n-list entries must be positive")
    return vals


def build_parser():
    p = argparse.ArgumentParser(prog="gue-extremes", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, metavar="PATH")
    common.add_argument("--seed", type=int, default=20100101)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("tw-table", parents=[common], help="F2 and F2' on a grid")
    s.add_argument("--grid", default="-10:6:0.05", metavar="lo:hi:step")

    s = sub.add_parser("figure1", parents=[common], help="correlation data behind Figure 1")
    s.add_argument("--n-list", type=_n_list, default=[2, 4, 8, 16, 32, 64])
    s.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    s.add_argument("--full", action="store_true", help=f"use {FULL_SAMPLES} Monte Carlo samples")
    s.add_argument("--no-mc", action="store_true", help="determinant and asymptote columns only")
    s.add_argument("--det-tol", type=float, default=1e-8)

    s = sub.add_parser("joint", parents=[common], help="joint CDF of the scaled extremes")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--x", type=float, required=True, help="bound on the scaled smallest eigenvalue")
    s.add_argument("--y", type=float, required=True, help="bound on the scaled largest eigenvalue")

    sub.add_parser("moments", parents=[common], help="Tracy-Widom mean and variance")

    s = sub.add_parser("montecarlo", parents=[common], help="sample correlation of the extremes")
    s.add_argument("--n-list", type=_n_list, required=True)
    s.add_argument("--ensemble", choices=("gue", "uniform"), default="gue")
    s.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        samples = getattr(args, "samples", DEFAULT_SAMPLES)
        if getattr(args, "full", False):
            samples = FULL_SAMPLES
        cfg = RunConfig(args.command, getattr(args, "n_list", []), args.tol, samples, args.seed, args.format, args.out)
        if args.command == "tw-table":
            cols, rows = cmd_tw_table(cfg, args.grid)
        elif args.command == "figure1":
            cols, rows = cmd_figure1(cfg, not args.no_mc, args.det_tol)
        elif args.command == "joint":
            cols, rows = cmd_joint(cfg, args.n, args.x, args.y)
        elif args.command == "moments":
            cols, rows = cmd_moments(cfg)
        else:
            cols, rows = cmd_montecarlo(cfg, args.ensemble)
        emit(render(cols, rows, cfg, {"samples": cfg.samples} if "samples" in args else None), cfg)
    except (DomainError, ValueError, OSError) as exc:
        print(f"gue-extremes: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
