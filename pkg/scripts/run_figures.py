#!/usr/bin/env python3
"""Run every canned figure scenario and collect the CSV/JSON artifacts.

Usage:
    python scripts/run_figures.py --out results [--figs fig2 fig5] [--workers 4]
"""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from entchain.scenarios import FIGURES, reproduce


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--figs", nargs="*", default=list(FIGURES), choices=FIGURES)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    out = Path(args.out)
    for fig in args.figs:
        start = time.time()
        summary = reproduce(fig, out, workers=args.workers)
        print(f"== {fig} ({time.time() - start:.1f}s) ==")
        print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
