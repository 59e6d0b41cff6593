"""Probability that at least one of n paths succeeds, for a few per-path success rates."""

import argparse

from ird.simulator import redundancy_curve


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, nargs="+", default=[0.1, 0.5, 0.9])
    ap.add_argument("--n-max", type=int, default=30)
    args = ap.parse_args()

    curves = {p: redundancy_curve(p, args.n_max) for p in args.p}
    print("n," + ",".join(f"p={p}" for p in args.p))
    for i in range(args.n_max):
        print(f"{i + 1}," + ",".join(f"{curves[p][i]:.6f}" for p in args.p))
    for p, curve in curves.items():
        for target in (0.99, 0.999):
            hit = next((n for n, v in enumerate(curve, 1) if v > target), None)
            print(f"# p={p}: first n above {target} = {hit}")


if __name__ == "__main__":
    main()
