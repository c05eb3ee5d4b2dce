#!/usr/bin/env python3
"""Regenerate every figure-reproduction CSV bundle into one directory.

Usage: python scripts/reproduce_figures.py [out_dir]   (default: ./figures)
"""

import sys
from pathlib import Path

from ppqkd.cli import main


def run(out_dir: str) -> int:
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    for which in (2, 3, 5, 6):
        code = main(["figures", "--which", str(which), "--out-dir", out_dir])
        if code != 0:
            print(f"figure {which} failed with exit code {code}", file=sys.stderr)
            return code
    print(f"all figure CSVs and gnuplot scripts written to {out_dir}/")
    return 0


if __name__ == "__main__":
    sys.exit(run(sys.argv[1] if len(sys.argv) > 1 else "figures"))
