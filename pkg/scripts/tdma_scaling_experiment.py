#!/usr/bin/env python3
"""Antenna-count scaling of the TDMA-relay pipeline.

Profile: beta = 3 (destinations vastly outnumber antennas), delta = q = 1/2.
In this regime the sum rate is expected to track m log2 m up to a constant,
so the experiment reports both the log-log slope and the ratio-constancy
statistic R_sum / (m log2 m).
"""

import argparse
import math
import sys
import time

from qfmimo import NetworkParams, fit_scaling, run_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", default="4,8,16,32", help="comma-separated sweep values")
    ap.add_argument("--beta", type=float, default=3.0)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--sample-size", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    m_list = [int(tok) for tok in args.m.split(",")]
    params = NetworkParams(
        beta=args.beta,
        q=0.5,
        delta=0.5,
        mode="tdma",
        seed=args.seed,
        trials=args.trials,
        sample_size=args.sample_size,
    )

    t0 = time.perf_counter()
    series = run_sweep(params, m_list, workers=args.workers)
    elapsed = time.perf_counter() - t0

    print(f"{'m':>4} {'n':>7} {'n1':>5} {'n2_mean':>8} {'R_sum':>10} "
          f"{'stderr':>8} {'R_upper':>10} {'R/(m lg m)':>11}")
    for row in series.rows:
        ratio = row.r_sum / (row.m * math.log2(row.m))
        print(f"{row.m:>4} {row.n:>7} {row.n1:>5} {row.n2_mean:>8.2f} "
              f"{row.r_sum:>10.4f} {row.r_sum_stderr:>8.4f} {row.r_upper:>10.2f} "
              f"{ratio:>11.4f}")

    power = fit_scaling(series, "power_law")
    ratio = fit_scaling(series, "m_log_m_ratio")
    print(f"\nlog-log slope: {power.slope:.3f} (rms residual {power.residual:.3g})")
    print(f"ratio constancy max/min: {ratio.max_min_ratio:.3f} "
          f"({'consistent with' if ratio.max_min_ratio <= 2.5 else 'deviates from'} m log m shape)")
    print(f"total runtime: {elapsed:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
