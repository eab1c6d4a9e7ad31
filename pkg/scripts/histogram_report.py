"""Pooled amplitude histogram of a plane-wave ensemble with Rayleigh and uniform fits below a cutoff."""
import argparse

import numpy as np

from nlse_tunnel import analysis as A
from nlse_tunnel.cli import run_ensemble, worker_count
from nlse_tunnel.config import load_config


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="fig2b")
    ap.add_argument("--seeds", type=int, default=4)
    ap.add_argument("--cutoff", type=float, default=1.5)
    args = ap.parse_args()

    _, edges, counts = run_ensemble(load_config(args.preset), args.seeds, 0, worker_count())
    rayleigh, uniform = A.low_amplitude_fit(edges, counts, args.cutoff)
    total = counts.sum()
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        if c:
            print(f"[{lo:5.2f}, {hi:5.2f})  {c / total:8.5f}  {'#' * int(60 * c / counts.max())}")
    print(f"L1 misfit below {args.cutoff}: rayleigh {rayleigh:.4f}, uniform {uniform:.4f}")
    print("closer to", "rayleigh" if rayleigh < uniform else "uniform")


if __name__ == "__main__":
    main()
