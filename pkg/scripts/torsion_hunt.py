#!/usr/bin/env python3
"""Hunt for torsion below the certification threshold.

Runs the search-torsion command over a list of singular seed fans with a
range of seeds and collects every finding under out/.  Findings at primes
q <= ceil((n+1)/2) are the interesting ones: there the identification of
Koszul homology with Borel-Moore homology is conjectural.

Usage: python scripts/torsion_hunt.py [--trials N] [--out DIR]
"""

import argparse
import sys

from fanhom.cli import main as fanhom_main

SEEDS = (1, 2, 3)
SEED_FANS = (
    ("quadric_cone_affine",),
    ("weighted_projective", "1", "1", "2"),
    ("weighted_projective", "1", "2", "3"),
    ("weighted_projective", "2", "3", "5"),
)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=8)
    parser.add_argument("--out", default="torsion-findings")
    args = parser.parse_args()
    worst = 0
    for spec in SEED_FANS:
        for seed in SEEDS:
            label = "_".join(spec) + f"_seed{seed}"
            print(f"== {label} ==")
            code = fanhom_main(
                [
                    "search-torsion",
                    "preset",
                    *spec,
                    "--seed",
                    str(seed),
                    "--trials",
                    str(args.trials),
                    "--out",
                    f"{args.out}/{label}",
                ]
            )
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
