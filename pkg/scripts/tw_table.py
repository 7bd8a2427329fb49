"""Tabulate F2 and F2' on a grid and report the moments read off the table.

    python scripts/tw_table.py --grid=-10:6:0.05 --out tw.csv
"""
import argparse

import numpy as np

from gue_extremes.cli import RunConfig, cmd_tw_table, emit, render


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--grid", default="-10:6:0.05")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", default="tw_table.csv")
    args = p.parse_args()
    cfg = RunConfig("tw-table", tol=args.tol, output_path=args.out)
    cols, rows = cmd_tw_table(cfg, args.grid)
    emit(render(cols, rows, cfg), cfg)
    t, _, f = (np.array(c) for c in zip(*rows))
    mean = np.trapezoid(t * f, t)
    print(f"wrote {len(rows)} rows to {args.out}")
    print(f"trapezoid: mass={np.trapezoid(f, t):.10f} mean={mean:.10f} variance={np.trapezoid(t * t * f, t) - mean ** 2:.10f}")


if __name__ == "__main__":
    main()
