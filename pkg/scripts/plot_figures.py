#!/usr/bin/env python3
"""Plot the CSV artifacts written by run_figures.py / `entchain reproduce`.

The computation tool itself never plots; this script consumes its CSV output.

Usage:
    python scripts/plot_figures.py --results results [--out results/plots]
"""

import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path: Path) -> list[dict]:
    with path.open() as f:
        return list(csv.DictReader(f))


def plot_entropy_sweep(path: Path, out: Path, title: str) -> None:
    rows = read_rows(path)
    curves = defaultdict(list)
    averages = defaultdict(list)
    for row in rows:
        v = float(row["axis_value"])
        if row["S_bits"]:
            curves[row["block_sites"]].append((v, float(row["S_bits"])))
        elif row["average_S_bits"]:
            averages[row["block_sites"]].append((v, float(row["average_S_bits"])))
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, pts in sorted(curves.items()):
        pts.sort()
        ax.plot(*zip(*pts), marker=".", ms=3, label=f"sites {label}")
    for label, pts in sorted(averages.items()):
        pts.sort()
        ax.plot(*zip(*pts), "k--", label=label)
    ax.set_xlabel("V / t")
    ax.set_ylabel("S (bits)")
    ax.set_title(title)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def plot_density_profiles(path: Path, out: Path) -> None:
    rows = read_rows(path)
    series = defaultdict(list)
    for row in rows:
        series[row["chain"]].append((int(row["position"]), float(row["density"])))
    fig, ax = plt.subplots(figsize=(6, 4))
    markers = {"impurity": "o", "effective_open_L8": "s"}
    for label, pts in series.items():
        pts.sort()
        ax.plot(*zip(*pts), marker=markers.get(label, "."), ls=":", label=label)
    ax.set_xlabel("position")
    ax.set_ylabel("density n_i")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def plot_enhancement_trend(path: Path, out: Path, xlabel: str) -> None:
    rows = read_rows(path)
    curves = defaultdict(list)
    for row in rows:
        if row["enhancement"]:
            curves[f"x={row['x']}"].append((float(row["axis_value"]),
                                            100 * float(row["enhancement"])))
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, pts in sorted(curves.items()):
        pts.sort()
        ax.plot(*zip(*pts), marker="o", ms=4, label=label)
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("enhancement (%)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--results", default="results")
    parser.add_argument("--out", default=None)
    args = parser.parse_args()
    results = Path(args.results)
    out = Path(args.out) if args.out else results / "plots"
    out.mkdir(parents=True, exist_ok=True)

    jobs = [
        ("fig2_single_site_vs_V.csv", "fig2.png",
         lambda p, t: plot_entropy_sweep(p, t, "single-site entropy vs V")),
        ("fig3a_density_profiles.csv", "fig3a.png",
         lambda p, t: plot_density_profiles(p, t)),
        ("fig4_block_entropy_vs_V.csv", "fig4.png",
         lambda p, t: plot_entropy_sweep(p, t, "block entropy vs V")),
        ("fig6a_enhancement_vs_V.csv", "fig6a.png",
         lambda p, t: plot_enhancement_trend(p, t, "V / t")),
        ("fig6b_enhancement_vs_U.csv", "fig6b.png",
         lambda p, t: plot_enhancement_trend(p, t, "U / t")),
    ]
    made = 0
    for name, png, fn in jobs:
        path = results / name
        if path.exists():
            fn(path, out / png)
            made += 1
            print(out / png)
    if made == 0:
        print(f"no known CSV files under {results}; run scripts/run_figures.py first",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
