"""Benchmark harness: strategy matrix runs, metric tables, and CSV outputs.

Strategy names map one-to-one onto the implemented variants: ``seq`` is the
sequential baseline (run it with one worker), ``within-levels``/``2-batches``/
``no-levels`` change how search-step evaluations are batched, and the
remaining names change how iterate centers are selected (all of them keep
level-structured batching). Cells of the (problem, strategy) matrix run one
at a time so intra-run parallelism gets uncontended workers and wall-clock
comparisons stay honest.
"""

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Problem
from .driver import RunReport, SelectionKind, SelectionStrategy, StopRule, run
from .external import external_problem
from .metrics import (
    FrontSet,
    build_reference,
    delta_metric,
    gamma_metric,
    hypervolume,
    performance_profile,
    purity,
)
from .parexec import BatchExecutor
from .problems import REGISTRY, SUITES, get_problem
from .search import EvalBatching, SearchStrategy

logger = logging.getLogger(__name__)

STRATEGIES: dict[str, tuple[SelectionKind, EvalBatching]] = {
    "seq": (SelectionKind.GAMMA_MAX_GAP, EvalBatching.WITHIN_LEVELS),
    "within-levels": (SelectionKind.GAMMA_MAX_GAP, EvalBatching.WITHIN_LEVELS),
    "2-batches": (SelectionKind.GAMMA_MAX_GAP, EvalBatching.TWO_BATCHES),
    "no-levels": (SelectionKind.GAMMA_MAX_GAP, EvalBatching.NO_LEVELS),
    "gamma-normalized": (SelectionKind.GAMMA_NORMALIZED, EvalBatching.WITHIN_LEVELS),
    "gamma-cyclic": (SelectionKind.GAMMA_CYCLIC, EvalBatching.WITHIN_LEVELS),
    "multicenter-plus": (SelectionKind.MULTI_SPREAD_PLUS_BEST, EvalBatching.WITHIN_LEVELS),
    "multicenter-alt": (SelectionKind.MULTI_SPREAD_OR_BEST, EvalBatching.WITHIN_LEVELS),
}


class UsageError(Exception):
    """Bad configuration; maps to exit code 2."""


@dataclass
class BenchConfig:
    problems: list[str]
    strategies: list[str]
    workers: int = 8
    max_evals: int = 20000
    min_alpha: float = 1e-3
    delay_s: float = 0.0
    reps: int = 5
    out_dir: Path = Path("bench-out")
    seed: int = 0
    evaluator: Problem | None = None

    def __post_init__(self):
        if self.reps < 1:
            raise UsageError("need at least one repetition")


def run_strategy(
    problem: Problem,
    strategy: str,
    *,
    workers: int = 8,
    max_evals: int = 20000,
    min_alpha: float = 1e-3,
    delay_s: float = 0.0,
    seed: int = 0,
    alpha0: float = 1.0,
    record_history: bool = False,
) -> RunReport:
    """Run one named strategy on one problem with a fresh executor."""
    if strategy not in STRATEGIES:
        raise UsageError(
            f"unknown strategy {strategy!r}; known: {', '.join(STRATEGIES)}"
        )
    selection_kind, batching = STRATEGIES[strategy]
    with BatchExecutor(workers=workers, delay_s=delay_s) as executor:
        return run(
            problem,
            SelectionStrategy(selection_kind),
            SearchStrategy(batching),
            StopRule(max_evals=max_evals, min_alpha=min_alpha),
            executor,
            seed=seed,
            alpha0=alpha0,
            record_history=record_history,
        )


def _fmt(v: float) -> str:
    return repr(float(v))


def write_front_csv(path: Path, report: RunReport, n: int, q: int):
    header = [f"x{i+1}" for i in range(n)] + [f"f{i+1}" for i in range(q)] + ["alpha"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for e in report.archive:
            writer.writerow([_fmt(v) for v in e.x] + [_fmt(v) for v in e.fx] + [_fmt(e.alpha)])


def _resolve_problems(cfg: BenchConfig) -> list[Problem]:
    if cfg.evaluator is not None:
        return [cfg.evaluator]
    problems = []
    for name in cfg.problems:
        try:
            problems.append(get_problem(name))
        except KeyError as exc:
            raise UsageError(str(exc)) from exc
    if not problems:
        raise UsageError("no problems selected (use --suite or --problem)")
    return problems


def run_matrix(cfg: BenchConfig) -> int:
    """Run every (problem, strategy) cell, write CSV outputs, return exit code."""
    problems = _resolve_problems(cfg)
    for s in cfg.strategies:
        if s not in STRATEGIES:
            raise UsageError(f"unknown strategy {s!r}; known: {', '.join(STRATEGIES)}")
    if not cfg.strategies:
        raise UsageError("no strategies selected")

    out = Path(cfg.out_dir)
    fronts_dir = out / "fronts"
    fronts_dir.mkdir(parents=True, exist_ok=True)

    deterministic = True
    diagnostics: list[str] = []
    cells: dict[tuple[str, str], dict] = {}
    for problem in problems:
        for strategy in cfg.strategies:
            reports: list[RunReport] = []
            for _ in range(cfg.reps):
                reports.append(
                    run_strategy(
                        problem,
                        strategy,
                        workers=cfg.workers,
                        max_evals=cfg.max_evals,
                        min_alpha=cfg.min_alpha,
                        delay_s=cfg.delay_s,
                        seed=cfg.seed,
                    )
                )
            base = reports[0].archive.decision_set()
            same = all(r.archive.decision_set() == base for r in reports[1:])
            if not same:
                deterministic = False
                diagnostics.append(
                    f"fronts differ across repetitions for ({problem.name}, {strategy})"
                )
            times = [r.wall_time_s for r in reports]
            cells[(problem.name, strategy)] = {
                "report": reports[0],
                "mean_time_s": float(np.mean(times)),
                "min_time_s": float(np.min(times)),
                "times": times,
                "evals": reports[0].eval_count,
            }
            write_front_csv(
                fronts_dir / f"{problem.name}__{strategy}.csv",
                reports[0],
                problem.n,
                problem.q,
            )

    metric_rows = []
    matrices = {m: np.full((len(problems), len(cfg.strategies)), np.nan)
                for m in ("purity", "gamma", "delta", "hypervolume", "time")}
    for pi, problem in enumerate(problems):
        fronts = {
            strategy: FrontSet(
                cells[(problem.name, strategy)]["report"].archive.objectives(),
                solver=strategy,
                problem=problem.name,
            )
            for strategy in cfg.strategies
        }
        ref = build_reference(fronts.values())
        for si, strategy in enumerate(cfg.strategies):
            cell = cells[(problem.name, strategy)]
            front = fronts[strategy]
            row = {
                "problem": problem.name,
                "solver": strategy,
                "purity": purity(front, ref),
                "gamma": gamma_metric(front, ref),
                "delta": delta_metric(front, ref),
                "hypervolume": hypervolume(front, ref),
                "evals": cell["evals"],
                "mean_time_s": cell["mean_time_s"],
            }
            metric_rows.append(row)
            matrices["purity"][pi, si] = row["purity"]
            matrices["gamma"][pi, si] = row["gamma"]
            matrices["delta"][pi, si] = row["delta"]
            matrices["hypervolume"][pi, si] = row["hypervolume"]
            matrices["time"][pi, si] = row["mean_time_s"]

    with open(out / "metrics.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["problem", "solver", "purity", "gamma", "delta", "hypervolume", "evals", "mean_time_s"]
        )
        for row in metric_rows:
            writer.writerow(
                [
                    row["problem"],
                    row["solver"],
                    _fmt(row["purity"]),
                    _fmt(row["gamma"]),
                    _fmt(row["delta"]),
                    _fmt(row["hypervolume"]),
                    row["evals"],
                    _fmt(row["mean_time_s"]),
                ]
            )

    with open(out / "profiles.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "solver", "tau", "rho"])
        for metric, invert in (
            ("purity", True),
            ("hypervolume", True),
            ("gamma", False),
            ("delta", False),
            ("time", False),
        ):
            curves = performance_profile(matrices[metric], cfg.strategies, invert=invert)
            for solver, (taus, rhos) in curves.items():
                for tau, rho in zip(taus, rhos):
                    writer.writerow([metric, solver, _fmt(tau), _fmt(rho)])

    summary = {
        "config": {
            "problems": [p.name for p in problems],
            "strategies": cfg.strategies,
            "workers": cfg.workers,
            "max_evals": cfg.max_evals,
            "min_alpha": cfg.min_alpha,
            "delay_s": cfg.delay_s,
            "reps": cfg.reps,
            "seed": cfg.seed,
        },
        "deterministic": deterministic,
        "diagnostics": diagnostics,
        "cells": {
            f"{p}::{s}": {
                "evals": c["evals"],
                "iterations": c["report"].iterations,
                "mean_time_s": c["mean_time_s"],
                "min_time_s": c["min_time_s"],
                "times": c["times"],
                "front_size": len(c["report"].archive),
            }
            for (p, s), c in cells.items()
        },
    }
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)

    if not deterministic:
        for line in diagnostics:
            print(f"determinism check failed: {line}", file=sys.stderr)
        return 3
    return 0


def _parse_bounds(text: str, n: int, flag: str) -> np.ndarray:
    parts = [p for p in text.split(",") if p]
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"{flag} must be a number or comma-separated list") from exc
    if len(values) == 1:
        return np.full(n, values[0])
    if len(values) != n:
        raise UsageError(f"{flag} needs 1 or {n} values, got {len(values)}")
    return np.asarray(values)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frontsearch-bench",
        description="Benchmark the multiobjective direct-search strategies.",
    )
    parser.add_argument("--suite", choices=sorted(SUITES), help="named problem suite")
    parser.add_argument(
        "--problem",
        action="append",
        default=[],
        help="problem name (repeatable or comma-separated)",
    )
    parser.add_argument(
        "--strategy",
        default="within-levels",
        help="comma-separated strategy names: " + ", ".join(STRATEGIES),
    )
    parser.add_argument("--workers", type=int, default=8)
    parser.add_argument("--max-evals", type=int, default=20000)
    parser.add_argument("--min-alpha", type=float, default=1e-3)
    parser.add_argument("--delay-ms", type=float, default=0.0,
                        help="injected latency per evaluation, milliseconds")
    parser.add_argument("--reps", type=int, default=5)
    parser.add_argument("--out", default="bench-out", help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--evaluator-cmd", default=None,
                        help="external evaluator command (line-protocol subprocess)")
    parser.add_argument("--evaluator-n", type=int, default=None)
    parser.add_argument("--evaluator-q", type=int, default=None)
    parser.add_argument("--evaluator-lb", default=None)
    parser.add_argument("--evaluator-ub", default=None)
    return parser


def _config_from_args(args) -> BenchConfig:
    problems: list[str] = []
    if args.suite:
        problems.extend(SUITES[args.suite])
    for chunk in args.problem:
        problems.extend(p for p in chunk.split(",") if p)
    evaluator = None
    if args.evaluator_cmd:
        missing = [
            flag
            for flag, v in (
                ("--evaluator-n", args.evaluator_n),
                ("--evaluator-q", args.evaluator_q),
                ("--evaluator-lb", args.evaluator_lb),
                ("--evaluator-ub", args.evaluator_ub),
            )
            if v is None
        ]
        if missing:
            raise UsageError("--evaluator-cmd requires " + ", ".join(missing))
        n, q = args.evaluator_n, args.evaluator_q
        evaluator = external_problem(
            args.evaluator_cmd,
            n,
            q,
            _parse_bounds(args.evaluator_lb, n, "--evaluator-lb"),
            _parse_bounds(args.evaluator_ub, n, "--evaluator-ub"),
        )
        if problems:
            raise UsageError("--evaluator-cmd cannot be combined with --suite/--problem")
    strategies = [s for s in args.strategy.split(",") if s]
    return BenchConfig(
        problems=problems,
        strategies=strategies,
        workers=args.workers,
        max_evals=args.max_evals,
        min_alpha=args.min_alpha,
        delay_s=args.delay_ms / 1000.0,
        reps=args.reps,
        out_dir=Path(args.out),
        seed=args.seed,
        evaluator=evaluator,
    )


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        started = time.perf_counter()
        code = run_matrix(cfg)
        elapsed = time.perf_counter() - started
        print(f"wrote results to {cfg.out_dir} in {elapsed:.1f}s")
        return code
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
