#!/usr/bin/env python3
"""Run every figure preset and write one CSV per figure.

Usage:
    python scripts/run_all_figures.py [--outdir results] [--trials N]
                                      [--seed S] [--workers W]

fig1 sweeps M up to 16384 and takes the longest; lower --trials for a
quick look at the curves.
"""

import argparse
import sys
import time
from pathlib import Path

from mimo_converge.cli import main as run_cli
from mimo_converge.presets import PRESETS


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="results", type=Path)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    for name, (_, description) in PRESETS.items():
        out = args.outdir / f"{name}.csv"
        argv = ["--preset", name, "--output", str(out)]
        for flag in ("trials", "seed", "workers"):
            value = getattr(args, flag)
            if value is not None:
                argv += [f"--{flag}", str(value)]
        print(f"=== {name}: {description}")
        start = time.perf_counter()
        code = run_cli(argv)
        if code != 0:
            print(f"{name} failed with exit code {code}", file=sys.stderr)
            return code
        print(f"=== {name} done in {time.perf_counter() - start:.1f}s -> {out}\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
