"""Print the scaled deviation (joint - product) n^{2/3} against 1/4 F2'(-x) F2'(y) for growing n."""
import argparse

from gue_extremes.distributions import joint_cdf, tw_pdf


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--n-list", default="16,32,64,128,256")
    args = p.parse_args()
    coef = 0.25 * tw_pdf(-args.x) * tw_pdf(args.y)
    print(f"limit coefficient 1/4 F2'(-x) F2'(y) = {coef:.10f}")
    prev = None
    for n in (int(v) for v in args.n_list.split(",")):
        s = joint_cdf(n, args.x, args.y).deviation * n ** (2 / 3)
        resid = s - coef
        note = "" if prev is None else f"  shrink={abs(prev / resid):.2f}"
        print(f"n={n:5d}  scaled deviation={s:.10f}  residual={resid:+.3e}{note}")
        prev = resid


if __name__ == "__main__":
    main()
