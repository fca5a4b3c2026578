"""Squaring map on P^2 blown up at a fixed point: pointwise identity and volume of {value < -1}."""

import argparse
import math

from noetherdyn.potentials import squaring_map


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rep = squaring_map(args.n_max, args.samples, args.seed)
    print(f"max pointwise identity error: {rep.max_identity_error:.2e}")
    print(f"chart volume of |s| < 1/e: {rep.chart_volume:.5f} (exact {math.exp(-2):.5f})")
    print(f"{'n':>3}  {'vol(value < -1)':>16}  {'std err':>9}")
    for n, v, s in zip(rep.n_values, rep.volumes, rep.std_errors):
        print(f"{n:>3}  {v:16.5f}  {s:9.2e}")
    print(rep.nonconvergence_ok(5, min(20, args.n_max)))


if __name__ == "__main__":
    main()
