"""Complete polling along signed coordinate directions."""

import numpy as np

from .core import Archive, ArchiveEntry, Array, EvalCache, Problem, chebyshev_distance


def generate_poll_points(
    center: ArchiveEntry, lb: Array, ub: Array, cache: EvalCache
) -> list[Array]:
    """Feasible, non-duplicate poll points around the center.

    Fixed order +e1, -e1, +e2, -e2, ... scaled by the center stepsize; points
    outside the box or within the cache duplicate tolerance (of the cache or
    of an earlier poll point) are dropped.
    """
    points: list[Array] = []
    for i in range(center.x.size):
        for sign in (1.0, -1.0):
            x = center.x.copy()
            x[i] += sign * center.alpha
            if np.any(x < lb) or np.any(x > ub):
                continue
            if cache.lookup(x) is not None:
                continue
            if any(chebyshev_distance(x, p) < cache.dup_tol for p in points):
                continue
            points.append(x)
    return points


def run_poll(
    center: ArchiveEntry,
    archive: Archive,
    cache: EvalCache,
    problem: Problem,
    executor,
) -> bool:
    """Evaluate the filtered poll set in one batch and merge into the archive.

    New entries inherit the center stepsize. Merging follows the fixed
    direction order, so the outcome matches a sequential complete poll.
    Returns True when the archive changed.
    """
    points = generate_poll_points(center, problem.lb, problem.ub, cache)
    results = executor.evaluate_batch(points, problem, cache.budget)
    changed = False
    for x, fx in zip(points, results):
        cache.add(x, fx)
        if np.isfinite(fx).all():
            if archive.insert(ArchiveEntry(x, fx, center.alpha)):
                changed = True
    return changed
