#!/usr/bin/env python3
"""Antenna-count scaling with hierarchical in-group relaying.

Profile: delta = 1/2 and q = epsilon, so groups stay nearly as large as the
whole network while the per-link relay rate degrades only as n2**(-epsilon).
This is the regime where group relaying pays off even when destinations only
moderately outnumber antennas (beta close to 1).
"""

import argparse
import math
import sys
import time

from qfmimo import NetworkParams, fit_scaling, run_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", default="4,8,16,32")
    ap.add_argument("--beta", type=float, default=2.0)
    ap.add_argument("--epsilon", type=float, default=0.05)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--sample-size", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    params = NetworkParams(
        beta=args.beta,
        q=args.epsilon,  # cell-area exponent tied to the relay-rate exponent
        delta=0.5,
        mode="hier",
        epsilon=args.epsilon,
        seed=args.seed,
        trials=args.trials,
        sample_size=args.sample_size,
    )
    m_list = [int(tok) for tok in args.m.split(",")]

    t0 = time.perf_counter()
    series = run_sweep(params, m_list, workers=args.workers)
    elapsed = time.perf_counter() - t0

    print(f"{'m':>4} {'n':>7} {'n1':>4} {'n2_mean':>9} {'R_sum':>10} "
          f"{'R_upper':>10} {'R/(m lg m)':>11}")
    for row in series.rows:
        print(f"{row.m:>4} {row.n:>7} {row.n1:>4} {row.n2_mean:>9.1f} "
              f"{row.r_sum:>10.4f} {row.r_upper:>10.2f} "
              f"{row.r_sum / (row.m * math.log2(row.m)):>11.4f}")

    power = fit_scaling(series, "power_law")
    ratio = fit_scaling(series, "m_log_m_ratio")
    print(f"\nlog-log slope: {power.slope:.3f} (rms residual {power.residual:.3g})")
    print(f"ratio constancy max/min: {ratio.max_min_ratio:.3f}")
    print(f"total runtime: {elapsed:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
