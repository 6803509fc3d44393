"""Full monotonicity sweep: 10,000 instances per (n, m) in {2..8}^2, all map families.

    python3 scripts/monotonicity_campaign.py --out runs/monotonicity [--jobs 4]
"""

import argparse
import time

from traceineq.campaign import CampaignConfig, run_campaign


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--per-pair", type=int, default=10_000)
    ap.add_argument("--dims", type=int, nargs=2, default=(2, 8))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="runs/monotonicity")
    args = ap.parse_args()

    lo, hi = args.dims
    pairs = (hi - lo + 1) ** 2
    cfg = CampaignConfig(
        seed=args.seed,
        trials=args.per_pair * pairs,
        dim_range=(lo, hi),
        checks=["monotonicity"],
        out_dir=args.out,
        jobs=args.jobs,
    )
    t0 = time.perf_counter()
    report = run_campaign(cfg)
    print(report.table(), end="")
    sec = report.checks["monotonicity"]
    print(f"{sec['count']} instances, exclusion rate {sec['exclusion_rate']:.2%}, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
