"""Regenerates the two synthetic datasets used by configs/sanity.json."""

import csv
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "sanity"


def write(name, rows, features, minority, shift, seed):
    rng = random.Random(seed)
    n_pos = round(rows * minority)
    path = OUT / f"{name}.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"m{j}" for j in range(features)] + ["defective"])
        for i in range(rows):
            faulty = i % (rows // n_pos) == 0 and i // (rows // n_pos) < n_pos
            # Only the first half of the features carry signal.
            vals = [rng.gauss(shift if faulty and j < features // 2 else 0.0, 1.0) for j in range(features)]
            w.writerow([f"{v:.6f}" for v in vals] + ["true" if faulty else "false"])


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    write("sanity_a", 400, 6, 0.10, 1.2, 1)
    write("sanity_b", 300, 8, 0.10, 1.0, 2)
