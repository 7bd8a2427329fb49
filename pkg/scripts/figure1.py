"""Regenerate the correlation data behind Figure 1 and print it as a small table.

    python scripts/figure1.py --samples 100000 --out figure1.csv
"""
import argparse

from gue_extremes.cli import RunConfig, cmd_figure1, emit, render


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n-list", default="2,4,8,16,32,64")
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=20100101)
    p.add_argument("--out", default=None)
    args = p.parse_args()
    cfg = RunConfig("figure1", [int(v) for v in args.n_list.split(",")], samples=args.samples, seed=args.seed,
                    output_path=args.out)
    cols, rows = cmd_figure1(cfg)
    emit(render(cols, rows, cfg), cfg)
    print(f"{'n':>4} {'rho_det':>10} {'rho_asym':>10} {'gue z':>7} {'unif*n^2/3':>11} {'unif/gue':>9}")
    for r in rows:
        rec = dict(zip(cols, r))
        z = (rec["rho_mc_gue"] - rec["rho_det"]) / rec["stderr_gue"]
        print(f"{rec['n']:>4} {rec['rho_det']:10.6f} {rec['rho_asym']:10.6f} {z:+7.2f} "
              f"{rec['rho_mc_uniform'] * rec['n'] ** (2 / 3):11.4f} {rec['rho_mc_uniform'] / rec['rho_det']:9.2f}")


if __name__ == "__main__":
    main()
