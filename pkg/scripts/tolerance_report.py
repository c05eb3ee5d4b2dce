#!/usr/bin/env python3
"""Print noise- and loss-tolerance tables across dimensions and channel modes.

The noise tolerance is the raw-key error rate where the asymptotic key rate
hits zero; the loss tolerance is the vacuum probability doing the same at a
fixed depolarization rate.
"""

import argparse

from ppqkd.keyrate import loss_tolerance, noise_tolerance


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--Q", type=float, default=0.05,
                        help="depolarization rate for the loss table (default 0.05)")
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 4, 8, 16])
    args = parser.parse_args()

    print("noise tolerance (raw-key error at zero asymptotic rate)")
    print(f"{'d':>4s} {'mode':>12s} {'ec=1.0':>10s} {'ec=1.2':>10s}")
    for d in args.dims:
        for mode in ("dependent", "independent"):
            ideal = noise_tolerance(d, mode, ec_factor=1.0)
            practical = noise_tolerance(d, mode, ec_factor=1.2)
            print(f"{d:4d} {mode:>12s} {ideal:10.4f} {practical:10.4f}")

    print()
    print(f"loss tolerance (vacuum probability at zero rate, Q = {args.Q})")
    print(f"{'d':>4s} {'mode':>12s} {'mu*':>10s}")
    for d in args.dims:
        for mode in ("dependent", "independent"):
            print(f"{d:4d} {mode:>12s} {loss_tolerance(d, mode, args.Q):10.4f}")


if __name__ == "__main__":
    main()
