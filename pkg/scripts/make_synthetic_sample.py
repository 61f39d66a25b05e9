#!/usr/bin/env python3
"""Regenerate data/synthetic_returns.csv.

The sample is SYNTHETIC: 60 months of 5-asset returns drawn from a normal
model whose frontier parameters match the bundled MSCI-derived estimates.
It exists so the CSV-driven CLI paths can be exercised end to end without
redistributing any vendor data.
"""

import csv
import pathlib

from mvequiv.mc_oracle import simulate_sample, synthesize_moments
from mvequiv.moments import FrontierParams
from mvequiv.reference import MSCI_FRONTIER

import numpy as np

SEED = 31415
OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "synthetic_returns.csv"


def main():
    f = FrontierParams(
        r_gmv=MSCI_FRONTIER.r_hat, v_gmv=MSCI_FRONTIER.v_hat, s=MSCI_FRONTIER.s_hat
    )
    truth = synthesize_moments(f, MSCI_FRONTIER.k, seed=SEED)
    sample = simulate_sample(truth, MSCI_FRONTIER.n, np.random.default_rng(SEED))
    OUT.parent.mkdir(exist_ok=True)
    with open(OUT, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"synthetic_asset_{i + 1}" for i in range(sample.k)])
        for row in sample.x:
            writer.writerow([f"{value:.8f}" for value in row])
    print(f"wrote {OUT} ({sample.n} periods x {sample.k} assets)")


if __name__ == "__main__":
    main()
