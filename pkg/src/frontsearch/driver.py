"""Outer optimization loop: center selection, search/poll sequencing, stepsize control.

Each iteration selects one or more archive entries as centers. Every center
gets a search step; centers whose search fails are polled, and a center whose
poll also fails has its stepsize halved. The run stops when the evaluation
budget is spent or every archive entry's stepsize has fallen below the
minimum.
"""

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import (
    Archive,
    ArchiveEntry,
    Array,
    EvalBudget,
    EvalCache,
    Problem,
    initialize,
)
from .poll import run_poll
from .search import SearchStrategy, run_search


class SelectionKind(Enum):
    GAMMA_MAX_GAP = "gamma-max-gap"
    GAMMA_NORMALIZED = "gamma-normalized"
    GAMMA_CYCLIC = "gamma-cyclic"
    MULTI_SPREAD_PLUS_BEST = "multicenter-plus"
    MULTI_SPREAD_OR_BEST = "multicenter-alt"


@dataclass(frozen=True)
class SelectionStrategy:
    kind: SelectionKind = SelectionKind.GAMMA_MAX_GAP


@dataclass(frozen=True)
class StopRule:
    max_evals: int = 20000
    min_alpha: float = 1e-3

    def __post_init__(self):
        if self.max_evals <= 0 or self.min_alpha <= 0:
            raise ValueError("stopping parameters must be positive")


@dataclass
class RunReport:
    archive: Archive
    eval_count: int
    iterations: int
    success_flags: list[bool]
    wall_time_s: float
    search_steps: int
    search_level_successes: dict[int, int]
    poll_steps: int
    poll_successes: int
    history: list[Array] | None = None

    @property
    def search_successes(self) -> int:
        return sum(self.search_level_successes.values())


def _largest_gap(F: Array, components, normalize: bool):
    """Row indices bounding the largest sorted-value gap of any component.

    Scans the given components in order; within a component, rows are sorted
    by value (stable on row index) and the first maximal gap wins. Returns
    (low, high, gap); for a single row both indices are 0.
    """
    count = len(F)
    if count == 1:
        return 0, 0, 0.0
    best_gap = -1.0
    best_pair = (0, 0)
    for i in components:
        vals = F[:, i]
        if normalize:
            lo, hi = float(vals.min()), float(vals.max())
            vals = np.zeros(count) if hi <= lo else (vals - lo) / (hi - lo)
        order = np.argsort(vals, kind="stable")
        sorted_vals = vals[order]
        gaps = sorted_vals[1:] - sorted_vals[:-1]
        k = int(np.argmax(gaps))
        if gaps[k] > best_gap:
            best_gap = float(gaps[k])
            best_pair = (int(order[k]), int(order[k + 1]))
    return best_pair[0], best_pair[1], best_gap


def _gap_select_index(F: Array, alphas: Array, mode: str, cycle_component: int) -> int:
    if not len(F):
        raise ValueError("no selectable entries")
    if mode not in ("raw", "normalized", "cyclic"):
        raise ValueError(f"unknown mode {mode!r}")
    q = F.shape[1]
    components = [cycle_component] if mode == "cyclic" else list(range(q))
    a, b, _ = _largest_gap(F, components, normalize=(mode == "normalized"))
    if a == b:
        return a
    if alphas[a] != alphas[b]:
        return a if alphas[a] > alphas[b] else b
    return min(a, b)


def gamma_gap_select(
    archive: Archive, mode: str = "raw", cycle_component: int = 0
) -> ArchiveEntry:
    """Entry at the largest objective-space gap of the current archive.

    mode 'raw' scans all components on raw values, 'normalized' rescales each
    component to [0, 1] first (flat components contribute zero gaps), and
    'cyclic' considers only ``cycle_component``. Of the two gap endpoints the
    one with the larger stepsize wins, then the lower archive index.
    """
    F, alphas = archive.arrays()
    return archive.entry_at(_gap_select_index(F, alphas, mode, cycle_component))


def select_iterates(
    archive: Archive,
    strategy: SelectionStrategy,
    iteration: int,
    cycle_component: int,
    *,
    min_alpha: float = 0.0,
) -> list[ArchiveEntry]:
    """Ordered, duplicate-free list of centers for one iteration.

    Entries whose stepsize has fallen below ``min_alpha`` are treated as
    converged: they stay on the front but are no longer selectable, which
    guarantees the outer loop makes progress toward its stopping rule.
    """
    if not len(archive):
        raise ValueError("archive is empty")
    F_all, alphas_all = archive.arrays()
    active = np.nonzero(alphas_all >= min_alpha)[0]
    if not active.size:
        raise ValueError("no selectable entries")
    F = F_all[active]
    alphas = alphas_all[active]
    kind = strategy.kind
    if kind is SelectionKind.GAMMA_MAX_GAP:
        picked = [_gap_select_index(F, alphas, "raw", cycle_component)]
    elif kind is SelectionKind.GAMMA_NORMALIZED:
        picked = [_gap_select_index(F, alphas, "normalized", cycle_component)]
    elif kind is SelectionKind.GAMMA_CYCLIC:
        picked = [_gap_select_index(F, alphas, "cyclic", cycle_component)]
    else:
        q = F.shape[1]
        best = [int(np.argmin(F[:, i])) for i in range(q)]
        a, b, _ = _largest_gap(F, [cycle_component], normalize=False)
        gap_pair = [a] if a == b else [a, b]
        if kind is SelectionKind.MULTI_SPREAD_PLUS_BEST:
            picked = best + gap_pair
        elif kind is SelectionKind.MULTI_SPREAD_OR_BEST:
            picked = gap_pair if iteration % 2 == 0 else best
        else:
            raise ValueError(f"unknown selection kind {kind}")
    seen: set[int] = set()
    out = []
    for j in picked:
        if j not in seen:
            seen.add(j)
            out.append(archive.entry_at(int(active[j])))
    return out


def run(
    problem: Problem,
    selection: SelectionStrategy,
    search_strategy: SearchStrategy,
    stop: StopRule,
    executor,
    *,
    alpha0: float = 1.0,
    dup_tol: float | None = None,
    seed: int = 0,
    record_history: bool = False,
) -> RunReport:
    """Run the full optimization loop and return the final archive and stats.

    ``dup_tol`` defaults to the minimum stepsize. With a deterministic
    evaluator the resulting archive does not depend on the executor's worker
    count.
    """
    t_start = time.perf_counter()
    dup_tol = stop.min_alpha if dup_tol is None else dup_tol
    budget = EvalBudget(stop.max_evals)
    cache = EvalCache(dup_tol=dup_tol, budget=budget)
    archive, cache = initialize(problem, alpha0, cache=cache, executor=executor)

    cycle = 0
    iteration = 0
    success_flags: list[bool] = []
    level_successes: dict[int, int] = {}
    search_steps = 0
    poll_steps = 0
    poll_successes = 0
    history: list[Array] | None = [archive.objectives()] if record_history else None

    while budget.remaining > 0 and any(e.alpha >= stop.min_alpha for e in archive):
        centers = select_iterates(
            archive, selection, iteration, cycle, min_alpha=stop.min_alpha
        )
        iter_success = False
        for center in centers:
            if budget.remaining <= 0:
                break
            outcome = run_search(
                center, archive, cache, problem, search_strategy, executor, seed=seed
            )
            search_steps += 1
            if outcome.success:
                level_successes[outcome.level] = level_successes.get(outcome.level, 0) + 1
                iter_success = True
                continue
            if budget.remaining <= 0:
                break
            poll_steps += 1
            if run_poll(center, archive, cache, problem, executor):
                poll_successes += 1
                iter_success = True
            elif center in archive:
                archive.replace(center, center.with_alpha(center.alpha / 2.0))
        success_flags.append(iter_success)
        if history is not None:
            history.append(archive.objectives())
        cycle = (cycle + 1) % problem.q
        iteration += 1

    return RunReport(
        archive=archive,
        eval_count=cache.eval_count,
        iterations=iteration,
        success_flags=success_flags,
        wall_time_s=time.perf_counter() - t_start,
        search_steps=search_steps,
        search_level_successes=level_successes,
        poll_steps=poll_steps,
        poll_successes=poll_successes,
        history=history,
    )
