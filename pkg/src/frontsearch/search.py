"""Model-based search step with level-structured batch evaluation.

At level l every combination of l component models is minimized jointly; the
resulting trial points are evaluated in parallel batches whose structure is
set by the strategy. Merging into the archive always follows the canonical
order (level ascending, combination lexicographic), which makes the final
archive independent of the worker count.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .core import Archive, ArchiveEntry, Array, EvalCache, Problem, chebyshev_distance
from .models import build_model, select_points
from .subsolve import SubproblemSpec, min_chebyshev, min_single_model


class EvalBatching(Enum):
    WITHIN_LEVELS = "within-levels"
    TWO_BATCHES = "2-batches"
    NO_LEVELS = "no-levels"


class ModelBuildMode(Enum):
    SEQUENTIAL = "sequential"
    LEVEL1 = "level1"
    LEVEL2_PLUS = "level2plus"
    ALL = "all"


@dataclass(frozen=True)
class SearchStrategy:
    batching: EvalBatching = EvalBatching.WITHIN_LEVELS
    model_build: ModelBuildMode = ModelBuildMode.SEQUENTIAL


@dataclass(frozen=True)
class SearchOutcome:
    success: bool
    evals_used: int
    level: int | None  # lowest level that produced a new nondominated point

    def __post_init__(self):
        if self.success != (self.level is not None):
            raise ValueError("level must be present exactly when successful")


def _dedup_candidates(cands, cache: EvalCache):
    """Drop cache duplicates and within-batch duplicates, keeping first wins."""
    kept = []
    for level, x in cands:
        if cache.lookup(x) is not None:
            continue
        if any(chebyshev_distance(x, y) < cache.dup_tol for _, y in kept):
            continue
        kept.append((level, x))
    return kept


def run_search(
    center: ArchiveEntry,
    archive: Archive,
    cache: EvalCache,
    problem: Problem,
    strategy: SearchStrategy,
    executor,
    *,
    seed: int = 0,
) -> SearchOutcome:
    """Run one search step around ``center``.

    Returns a failure outcome without spending evaluations when fewer than
    n+2 cached points lie in the sampling ball or when every component model
    is degenerate.
    """
    n, q = problem.n, problem.q
    radius = 2.0 * center.alpha
    cap = (n + 1) * (n + 2)
    iset = select_points(cache, center.x, radius, cap)
    if iset.size < n + 2:
        return SearchOutcome(False, 0, None)

    mb = strategy.model_build
    build = lambda i: build_model(iset, iset.values[:, i])
    if mb in (ModelBuildMode.LEVEL1, ModelBuildMode.ALL):
        built = executor.map_tasks(build, range(q))
    else:
        built = [build(i) for i in range(q)]
    usable = [i for i in range(q) if built[i] is not None]
    if not usable:
        return SearchOutcome(False, 0, None)

    single_solutions: dict[int, Array] = {}

    def solve(combo) -> Array:
        if len(combo) == 1:
            return min_single_model(built[combo[0]], radius, problem.lb, problem.ub)
        spec = SubproblemSpec(
            tuple(built[i] for i in combo), center.x, radius, problem.lb, problem.ub
        )
        warm = tuple(single_solutions[i] for i in combo)
        return min_chebyshev(spec, seed=seed, single_minimizers=warm)

    per_level: list[tuple[int, list[Array]]] = []
    for level in range(1, q + 1):
        combos = [c for c in combinations(range(q), level) if all(i in usable for i in c)]
        if not combos:
            continue
        parallel = (level == 1 and mb in (ModelBuildMode.LEVEL1, ModelBuildMode.ALL)) or (
            level >= 2 and mb in (ModelBuildMode.LEVEL2_PLUS, ModelBuildMode.ALL)
        )
        if parallel:
            sols = executor.map_tasks(solve, combos)
        else:
            sols = [solve(c) for c in combos]
        if level == 1:
            single_solutions.update((c[0], s) for c, s in zip(combos, sols))
        per_level.append((level, sols))

    def run_batch(cands):
        points = [x for _, x in cands]
        results = executor.evaluate_batch(points, problem, cache.budget)
        changed, first_level = False, None
        for (level, x), fx in zip(cands[: len(results)], results):
            cache.add(x, fx)
            if np.isfinite(fx).all():
                if archive.insert(ArchiveEntry(x, fx, center.alpha)):
                    changed = True
                    if first_level is None:
                        first_level = level
        return changed, first_level, len(results)

    total_evals = 0
    if strategy.batching is EvalBatching.WITHIN_LEVELS:
        for level, sols in per_level:
            if cache.budget.remaining <= 0:
                break
            cands = _dedup_candidates([(level, x) for x in sols], cache)
            if not cands:
                continue
            changed, first_level, used = run_batch(cands)
            total_evals += used
            if changed:
                return SearchOutcome(True, total_evals, first_level)
        return SearchOutcome(False, total_evals, None)

    if strategy.batching is EvalBatching.TWO_BATCHES:
        head = [(lvl, x) for lvl, sols in per_level if lvl == 1 for x in sols]
        tail = [(lvl, x) for lvl, sols in per_level if lvl >= 2 for x in sols]
        for group in (head, tail):
            if cache.budget.remaining <= 0:
                break
            cands = _dedup_candidates(group, cache)
            if not cands:
                continue
            changed, first_level, used = run_batch(cands)
            total_evals += used
            if changed:
                return SearchOutcome(True, total_evals, first_level)
        return SearchOutcome(False, total_evals, None)

    # NO_LEVELS: one batch covering every level.
    flat = [(lvl, x) for lvl, sols in per_level for x in sols]
    if cache.budget.remaining <= 0:
        return SearchOutcome(False, 0, None)
    cands = _dedup_candidates(flat, cache)
    if not cands:
        return SearchOutcome(False, 0, None)
    changed, first_level, used = run_batch(cands)
    return SearchOutcome(changed, used, first_level if changed else None)
