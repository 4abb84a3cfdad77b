"""Problem definition, Pareto dominance, nondominated archive, and evaluation cache.

All decision and objective vectors are plain float ndarrays. Objective
components may be +inf, which marks a failed (hidden-constraint) evaluation:
such points are kept in the evaluation cache for duplicate filtering but are
never admitted to the archive or to model interpolation sets.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Array = np.ndarray


class InitializationFailed(RuntimeError):
    """No starting point produced a finite objective vector."""


def sanitize_objective(raw, q: int) -> Array:
    """Coerce an evaluator result to a length-``q`` float vector.

    Any NaN component invalidates the whole evaluation: the vector collapses
    to all +inf, the convention used for hidden-constraint failures.
    """
    fx = np.asarray(raw, dtype=float).reshape(-1)
    if fx.shape != (q,):
        raise ValueError(f"evaluator returned {fx.shape[0]} components, expected {q}")
    if np.isnan(fx).any():
        return np.full(q, np.inf)
    return fx.copy()


def dominates(a: Array, b: Array) -> bool:
    """True when objective vector ``a`` Pareto-dominates ``b``.

    ``a`` dominates ``b`` iff ``a <= b`` componentwise with strict inequality
    in at least one component. A vector containing a +inf component never
    dominates anything.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if np.isposinf(a).any():
        return False
    return bool(np.all(a <= b) and np.any(a < b))


def chebyshev_distance(x: Array, y: Array) -> float:
    """Max-norm distance between two decision vectors."""
    return float(np.max(np.abs(np.asarray(x, float) - np.asarray(y, float))))


@dataclass(frozen=True)
class Problem:
    """A bound-constrained multiobjective problem with a black-box evaluator.

    Attributes:
        n: number of decision variables.
        q: number of objective components (at least 2).
        lb, ub: finite bound vectors of length ``n`` with ``lb < ub``.
        evaluate: deterministic map from a decision vector to ``q``
            extended-real objective values (components may be +inf).
        name: optional identifier used in reports.
    """

    n: int
    q: int
    lb: Array
    ub: Array
    evaluate: Callable[[Array], Array]
    name: str = ""

    def __post_init__(self):
        lb = np.asarray(self.lb, dtype=float).reshape(-1)
        ub = np.asarray(self.ub, dtype=float).reshape(-1)
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.q < 2:
            raise ValueError("need at least two objective components")
        if lb.shape != (self.n,) or ub.shape != (self.n,):
            raise ValueError("bound vectors must have length n")
        if not (np.isfinite(lb).all() and np.isfinite(ub).all()):
            raise ValueError("bounds must be finite")
        if not np.all(lb < ub):
            raise ValueError("lb < ub must hold componentwise")
        object.__setattr__(self, "lb", lb)
        object.__setattr__(self, "ub", ub)

    def __call__(self, x: Array) -> Array:
        return sanitize_objective(self.evaluate(np.asarray(x, float)), self.q)

    def centroid(self) -> Array:
        return (self.lb + self.ub) / 2.0


@dataclass(frozen=True)
class ArchiveEntry:
    """A feasible nondominated point with its objective values and stepsize."""

    x: Array
    fx: Array
    alpha: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        fx = np.asarray(self.fx, dtype=float).reshape(-1)
        if self.alpha <= 0:
            raise ValueError("stepsize must be positive")
        if not np.isfinite(fx).all():
            raise ValueError("archive entries require finite objective values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "fx", fx)

    def with_alpha(self, alpha: float) -> "ArchiveEntry":
        return ArchiveEntry(self.x, self.fx, alpha)


class EvalBudget:
    """Counter of true evaluator calls, shared by the cache and the executor."""

    def __init__(self, limit: int | None = None):
        if limit is not None and limit < 0:
            raise ValueError("budget limit must be nonnegative")
        self.limit = limit
        self.used = 0

    @property
    def remaining(self) -> int:
        if self.limit is None:
            return 2**62
        return max(0, self.limit - self.used)


class EvalCache:
    """All evaluated points with their objective vectors, in evaluation order.

    Duplicate filtering uses a strict max-norm tolerance ``dup_tol``; the
    first matching record wins. ``eval_count`` reflects true evaluator calls
    only (cache hits never increment it).
    """

    def __init__(self, dup_tol: float = 1e-3, budget: EvalBudget | None = None):
        if dup_tol <= 0:
            raise ValueError("dup_tol must be positive")
        self.dup_tol = float(dup_tol)
        self.budget = budget if budget is not None else EvalBudget()
        self.lookup_misses = 0
        self._X: Array | None = None
        self._F: Array | None = None
        self._size = 0
        # records bucketed by the first coordinate (floor(x0 / dup_tol)), so a
        # lookup only scans a handful of nearby records instead of the cache
        self._buckets: dict[int, list[int]] = {}

    def __len__(self) -> int:
        return self._size

    @property
    def eval_count(self) -> int:
        return self.budget.used

    def _grow(self, n: int, q: int):
        cap = max(64, 2 * self._size)
        X = np.empty((cap, n))
        F = np.empty((cap, q))
        if self._size:
            X[: self._size] = self._X[: self._size]
            F[: self._size] = self._F[: self._size]
        self._X, self._F = X, F

    def _bucket_of(self, x0: float) -> int:
        return int(np.floor(x0 / self.dup_tol))

    def add(self, x: Array, fx: Array):
        x = np.asarray(x, float).reshape(-1)
        fx = np.asarray(fx, float).reshape(-1)
        if self._X is None or self._size == len(self._X):
            self._grow(x.size, fx.size)
        self._X[self._size] = x
        self._F[self._size] = fx
        self._buckets.setdefault(self._bucket_of(x[0]), []).append(self._size)
        self._size += 1

    def lookup(self, x: Array) -> Array | None:
        """Objective vector of the first record within ``dup_tol``, else None."""
        if self._size:
            x = np.asarray(x, float)
            b = self._bucket_of(float(x[0]))
            candidates = []
            for nb in range(b - 2, b + 3):  # wide window: safe at bucket edges
                candidates.extend(self._buckets.get(nb, ()))
            if candidates:
                candidates.sort()  # first record (insertion order) wins
                rows = self._X[candidates]
                d = np.max(np.abs(rows - x), axis=1)
                hit = d < self.dup_tol
                if hit.any():
                    return self._F[candidates[int(np.argmax(hit))]].copy()
        self.lookup_misses += 1
        return None

    def points_within(self, center: Array, radius: float) -> tuple[Array, Array]:
        """Finite-valued records within max-norm ``radius`` of ``center``.

        Returns (points, values) row-aligned, in insertion order.
        """
        if not self._size:
            return np.empty((0, 0)), np.empty((0, 0))
        X = self._X[: self._size]
        F = self._F[: self._size]
        d = np.max(np.abs(X - np.asarray(center, float)), axis=1)
        keep = (d <= radius) & np.isfinite(F).all(axis=1)
        return X[keep].copy(), F[keep].copy()


class Archive:
    """Ordered list of mutually nondominated feasible points.

    Decision and objective rows are mirrored in stacked arrays so duplicate
    and dominance checks stay vectorized as the archive grows.
    """

    def __init__(self, dup_tol: float = 1e-3):
        if dup_tol <= 0:
            raise ValueError("dup_tol must be positive")
        self.dup_tol = float(dup_tol)
        self._entries: list[ArchiveEntry] = []
        self._ids: set[int] = set()
        self._X: Array | None = None
        self._F: Array | None = None
        self._alpha: Array = np.empty(0)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __contains__(self, entry: ArchiveEntry) -> bool:
        return id(entry) in self._ids

    @property
    def entries(self) -> list[ArchiveEntry]:
        return list(self._entries)

    def insert(self, cand: ArchiveEntry) -> bool:
        """Insert a candidate, dropping every entry it dominates.

        Rejected (returns False) when the candidate duplicates an existing
        entry within ``dup_tol`` or is dominated by one. The duplicate check
        runs first so float-noise twins never coexist. Survivor order is
        preserved and the candidate is appended last.
        """
        if self._entries:
            X, F = self._X, self._F
            if np.any(np.max(np.abs(X - cand.x), axis=1) < self.dup_tol):
                return False
            fx = cand.fx
            if np.any(np.all(F <= fx, axis=1) & np.any(F < fx, axis=1)):
                return False
            alpha = self._alpha
            removed = np.all(fx <= F, axis=1) & np.any(fx < F, axis=1)
            if removed.any():
                keep = ~removed
                dropped = [e for e, k in zip(self._entries, keep) if not k]
                self._ids.difference_update(id(e) for e in dropped)
                self._entries = [e for e, k in zip(self._entries, keep) if k]
                X, F, alpha = X[keep], F[keep], alpha[keep]
            self._X = np.vstack([X, cand.x[None, :]])
            self._F = np.vstack([F, cand.fx[None, :]])
            self._alpha = np.append(alpha, cand.alpha)
        else:
            self._X = cand.x[None, :].copy()
            self._F = cand.fx[None, :].copy()
            self._alpha = np.array([cand.alpha])
        self._entries.append(cand)
        self._ids.add(id(cand))
        return True

    def replace(self, old: ArchiveEntry, new: ArchiveEntry):
        """Swap an entry in place, keeping its position."""
        for i, e in enumerate(self._entries):
            if e is old:
                self._entries[i] = new
                self._ids.discard(id(old))
                self._ids.add(id(new))
                self._X[i] = new.x
                self._F[i] = new.fx
                self._alpha[i] = new.alpha
                return
        raise ValueError("entry not present in archive")

    def objectives(self) -> Array:
        if not self._entries:
            return np.empty((0, 0))
        return self._F.copy()

    def alphas(self) -> Array:
        return self._alpha.copy()

    def arrays(self) -> tuple[Array, Array]:
        """Stacked (objectives, alphas) views; callers must not mutate them."""
        if not self._entries:
            return np.empty((0, 0)), self._alpha
        return self._F, self._alpha

    def entry_at(self, index: int) -> ArchiveEntry:
        return self._entries[index]

    def decision_set(self) -> frozenset:
        """Decision vectors as an order-insensitive set of byte keys."""
        return frozenset(e.x.tobytes() for e in self._entries)


def starting_points(problem: Problem) -> list[Array]:
    """Evenly spaced points on the diagonal joining the bounds, plus the centroid.

    For ``n >= 2`` the line includes both bound corners; for ``n == 1`` it
    degenerates to the lower bound.
    """
    lb, ub, n = problem.lb, problem.ub, problem.n
    if n == 1:
        line = [lb.copy()]
    else:
        line = [lb + (j / (n - 1)) * (ub - lb) for j in range(n)]
    return line + [problem.centroid()]


def _evaluate_points(points, problem: Problem, budget: EvalBudget, executor):
    if executor is not None:
        return executor.evaluate_batch(points, problem, budget)
    results = []
    for x in points:
        if budget.remaining <= 0:
            break
        results.append(problem(x))
        budget.used += 1
    return results


def initialize(
    problem: Problem,
    alpha0: float = 1.0,
    *,
    cache: EvalCache | None = None,
    executor=None,
) -> tuple[Archive, EvalCache]:
    """Evaluate the starting set and build the initial archive and cache.

    Points with any +inf objective component enter the cache but not the
    archive. Raises InitializationFailed when no candidate evaluates to a
    fully finite vector.
    """
    if alpha0 <= 0:
        raise ValueError("alpha0 must be positive")
    if cache is None:
        cache = EvalCache()
    pending: list[Array] = []
    for x in starting_points(problem):
        if cache.lookup(x) is not None:
            continue
        if any(chebyshev_distance(x, p) < cache.dup_tol for p in pending):
            continue
        pending.append(x)
    results = _evaluate_points(pending, problem, cache.budget, executor)
    for x, fx in zip(pending, results):
        cache.add(x, fx)
    archive = Archive(dup_tol=cache.dup_tol)
    for x, fx in zip(pending, results):
        if np.isfinite(fx).all():
            archive.insert(ArchiveEntry(x, fx, alpha0))
    if not len(archive):
        raise InitializationFailed(
            f"no finite-valued starting point for problem {problem.name!r}"
        )
    return archive, cache
