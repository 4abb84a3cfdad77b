#!/usr/bin/env python3
"""Desk-scale comparison of the evaluation-batching and center-selection strategies.

Runs the full strategy matrix on a configurable suite with a shared budget and
writes front, metric, and performance-profile CSVs. With --delay-ms > 0 the
wall-time columns become meaningful speedup measurements; keep the machine
otherwise idle for honest numbers.
"""
import argparse
import sys
from pathlib import Path

from frontsearch.bench import STRATEGIES, BenchConfig, run_matrix
from frontsearch.problems import SUITES

DEFAULT_STRATEGIES = ",".join(STRATEGIES)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--suite", default="smoke", choices=sorted(SUITES))
    parser.add_argument("--strategy", default=DEFAULT_STRATEGIES)
    parser.add_argument("--workers", type=int, default=8)
    parser.add_argument("--max-evals", type=int, default=3000)
    parser.add_argument("--delay-ms", type=float, default=0.0)
    parser.add_argument("--reps", type=int, default=1)
    parser.add_argument("--out", default="strategy-comparison")
    args = parser.parse_args()
    cfg = BenchConfig(
        problems=SUITES[args.suite],
        strategies=[s for s in args.strategy.split(",") if s],
        workers=args.workers,
        max_evals=args.max_evals,
        delay_s=args.delay_ms / 1000.0,
        reps=args.reps,
        out_dir=Path(args.out),
    )
    code = run_matrix(cfg)
    print(f"results in {cfg.out_dir}")
    return code


if __name__ == "__main__":
    sys.exit(main())
