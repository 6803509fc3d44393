"""Sample F(H, Y0 + tD) and log F along random lines and report their curvature.

Prints the worst finite-difference second derivatives over many paths and
writes one path's profile (t, f, log f) to CSV for plotting elsewhere.

    python3 scripts/curvature_scan.py --paths 500 --profile runs/profile.csv
"""

import argparse
import csv
import math

import numpy as np

from traceineq import samplers
from traceineq.campaign import random_path
from traceineq.variational import concavity_probe, second_derivative_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dims", type=int, nargs=2, default=(2, 6))
    ap.add_argument("--profile", help="CSV of one path's profile")
    args = ap.parse_args()

    worst_f = worst_g = worst_id = -math.inf
    worst_mid = math.inf
    for i in range(args.paths):
        rng = samplers.trial_rng(args.seed, i)
        path = random_path(int(rng.integers(args.dims[0], args.dims[1] + 1)), rng)
        r = second_derivative_probe(path, float(rng.uniform(-0.5, 0.5)))
        worst_f = max(worst_f, r.d2f / max(1.0, r.f))
        worst_g = max(worst_g, r.d2g / max(1.0, abs(math.log(r.f))))
        worst_id = max(worst_id, r.identity_relative)
        worst_mid = min(worst_mid, concavity_probe(None, path=path, grid=np.linspace(-1, 1, 9)))
    print(f"{args.paths} paths")
    print(f"max f''/scale        {worst_f:.3e}   (concave: <= 0)")
    print(f"max (log f)''/scale  {worst_g:.3e}   (log-concave: <= 0)")
    print(f"max identity error   {worst_id:.3e}")
    print(f"min midpoint gap     {worst_mid:.3e}   (concave: >= 0)")

    if args.profile:
        path = random_path(4, samplers.trial_rng(args.seed, 0))
        with open(args.profile, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "f", "log_f"])
            for t in np.linspace(-1, 1, 201):
                f = path.f(float(t))
                w.writerow([f"{t:.4f}", repr(f), repr(math.log(f))])
        print(f"profile written to {args.profile}")


if __name__ == "__main__":
    main()
