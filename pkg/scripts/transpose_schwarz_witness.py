"""Show the transpose map is positive and unital but neither CP nor Schwarz.

    python3 scripts/transpose_schwarz_witness.py --dim 2
"""

import argparse

import numpy as np

from traceineq import maps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--trials", type=int, default=1000)
    args = ap.parse_args()

    T = maps.Transpose(args.dim)
    cert = maps.certify(T)
    print(f"unital={cert.is_unital} trace_preserving={cert.is_trace_preserving} cp={cert.is_cp}")
    print(f"Choi spectrum: {np.round(np.linalg.eigvalsh(maps.choi(T)), 12)}")
    probe = maps.schwarz_probe(T, trials=args.trials)
    print(f"Schwarz probe: witnessed={probe.witnessed} worst min-eig {probe.worst:.6f}")
    if probe.witness is not None:
        np.set_printoptions(precision=4, suppress=True)
        print("violating A:")
        print(probe.witness)


if __name__ == "__main__":
    main()
